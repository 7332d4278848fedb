#pragma once

#include <cstdint>
#include <string>

#include "liftnet/net.hpp"
#include "liftnet/randomnet.hpp"

namespace liftnet::checkpoint {

/// Self-describing little-endian binary model file; the exact byte layout is
/// documented in the README ("Checkpoint format"). file_kind 0 stores a
/// Network, file_kind 1 a RandomStack (realized matrices, not seeds).
struct Header {
    uint64_t seed = 0;
    uint64_t config_hash = 0;
};

void save_network(const std::string& path, const net::Network& n, const Header& header);
net::Network load_network(const std::string& path, Header* header = nullptr);

void save_random_stack(const std::string& path, const randomnet::RandomStack& s, const Header& header);
randomnet::RandomStack load_random_stack(const std::string& path, Header* header = nullptr);

}  // namespace liftnet::checkpoint
