#pragma once

#include <cstdint>
#include <string>

#include "liftnet/data.hpp"

namespace liftnet::data {

/// Deterministic synthetic stand-in for the public California-housing CSV,
/// for environments where the real file is not available. Same schema
/// (including ocean_proximity and occasional missing total_bedrooms), metro
/// clusters along the coastline, log-normal income, and a nonlinear price
/// surface with calibrated noise so that reference models land in the same
/// error range as on the real data. Values are capped at $500,001 like the
/// original. This is NOT the real dataset; see the README.
void write_synthetic_housing_csv(const std::string& path, int rows, uint64_t seed);

}  // namespace liftnet::data
