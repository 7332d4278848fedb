#include "liftnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace liftnet::checkpoint {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint files are little-endian; byte-swapping is not implemented");

constexpr char kMagic[8] = {'L', 'N', 'E', 'T', 'C', 'K', 'P', '1'};
constexpr uint8_t kKindNetwork = 0;
constexpr uint8_t kKindRandomStack = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(std::istream& in, size_t n) {
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

struct LayerRecord {
    uint8_t kind = 0;
    uint8_t flags = 0;
    uint8_t act_present = 0;
    uint8_t act_kind = 0;
    double act_alpha = 0.0;
    double act_beta = 0.0;
    Matrix param;
    Vec bias;
};

void write_layer(std::ostream& out, const LayerRecord& rec) {
    write_pod(out, rec.kind);
    write_pod(out, rec.flags);
    write_pod(out, rec.act_present);
    write_pod(out, rec.act_kind);
    write_pod(out, rec.act_alpha);
    write_pod(out, rec.act_beta);
    write_pod(out, static_cast<uint32_t>(rec.param.rows()));
    write_pod(out, static_cast<uint32_t>(rec.param.cols()));
    write_doubles(out, rec.param.data());
    write_pod(out, static_cast<uint32_t>(rec.bias.size()));
    write_doubles(out, rec.bias);
}

LayerRecord read_layer(std::istream& in) {
    LayerRecord rec;
    rec.kind = read_pod<uint8_t>(in);
    rec.flags = read_pod<uint8_t>(in);
    rec.act_present = read_pod<uint8_t>(in);
    rec.act_kind = read_pod<uint8_t>(in);
    rec.act_alpha = read_pod<double>(in);
    rec.act_beta = read_pod<double>(in);
    const auto rows = read_pod<uint32_t>(in);
    const auto cols = read_pod<uint32_t>(in);
    rec.param = Matrix(static_cast<int>(rows), static_cast<int>(cols),
                       read_doubles(in, static_cast<size_t>(rows) * cols));
    const auto blen = read_pod<uint32_t>(in);
    rec.bias = read_doubles(in, blen);
    return rec;
}

Activation activation_from_record(uint8_t kind, double alpha, double beta) {
    switch (static_cast<Activation::Kind>(kind)) {
        case Activation::Kind::identity: return Activation::identity();
        case Activation::Kind::relu: return Activation::relu();
        case Activation::Kind::leaky_relu: return Activation::leaky_relu(alpha);
        case Activation::Kind::sigmoid: return Activation::sigmoid();
        case Activation::Kind::tanh_fn: return Activation::tanh_fn();
        case Activation::Kind::gprelu: return Activation::gprelu(alpha, beta);
    }
    throw std::runtime_error("checkpoint: unknown activation kind " + std::to_string(kind));
}

void fill_activation_record(const Activation& act, LayerRecord& rec) {
    rec.act_present = 1;
    rec.act_kind = static_cast<uint8_t>(act.kind());
    rec.act_alpha = act.alpha();
    rec.act_beta = act.beta();
}

void write_preamble(std::ostream& out, uint8_t file_kind, const Header& header, uint32_t n_layers) {
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, file_kind);
    write_pod(out, header.seed);
    write_pod(out, header.config_hash);
    write_pod(out, n_layers);
}

uint32_t read_preamble(std::istream& in, uint8_t expect_kind, Header* header) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const auto kind = read_pod<uint8_t>(in);
    if (kind != expect_kind) throw std::runtime_error("checkpoint: unexpected file kind");
    Header h;
    h.seed = read_pod<uint64_t>(in);
    h.config_hash = read_pod<uint64_t>(in);
    if (header) *header = h;
    return read_pod<uint32_t>(in);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
    return in;
}

}  // namespace

void save_network(const std::string& path, const net::Network& n, const Header& header) {
    std::ofstream out = open_out(path);
    write_preamble(out, kKindNetwork, header, static_cast<uint32_t>(n.depth()));
    for (const net::Layer& layer : n.layers()) {
        LayerRecord rec;
        rec.kind = static_cast<uint8_t>(layer.kind);
        rec.flags = layer.frozen ? 1 : 0;
        if (layer.act) fill_activation_record(*layer.act, rec);
        rec.param = layer.param;
        rec.bias = layer.bias;
        write_layer(out, rec);
    }
}

net::Network load_network(const std::string& path, Header* header) {
    std::ifstream in = open_in(path);
    const uint32_t n_layers = read_preamble(in, kKindNetwork, header);
    std::vector<net::Layer> layers;
    for (uint32_t j = 0; j < n_layers; ++j) {
        const LayerRecord rec = read_layer(in);
        std::optional<Activation> act;
        if (rec.act_present) act = activation_from_record(rec.act_kind, rec.act_alpha, rec.act_beta);
        net::Layer layer = rec.kind == static_cast<uint8_t>(net::Layer::Kind::exp_generator)
                               ? net::exp_layer(rec.param, rec.bias, act)
                               : net::direct_layer(rec.param, rec.bias, act, (rec.flags & 1) != 0);
        layers.push_back(std::move(layer));
    }
    return net::Network(std::move(layers));
}

void save_random_stack(const std::string& path, const randomnet::RandomStack& s, const Header& header) {
    std::ofstream out = open_out(path);
    write_preamble(out, kKindRandomStack, header, static_cast<uint32_t>(s.k()));
    for (int j = 0; j < s.k(); ++j) {
        LayerRecord rec;
        rec.kind = 0;
        rec.flags = 1;  // random stacks are frozen by definition
        fill_activation_record(s.act, rec);
        rec.param = s.weights[static_cast<size_t>(j)];
        rec.bias = s.biases[static_cast<size_t>(j)];
        write_layer(out, rec);
    }
}

randomnet::RandomStack load_random_stack(const std::string& path, Header* header) {
    std::ifstream in = open_in(path);
    const uint32_t n_layers = read_preamble(in, kKindRandomStack, header);
    if (n_layers == 0) throw std::runtime_error("checkpoint: empty random stack");
    randomnet::RandomStack s;
    for (uint32_t j = 0; j < n_layers; ++j) {
        const LayerRecord rec = read_layer(in);
        if (!rec.act_present) throw std::runtime_error("checkpoint: random stack layer lacks an activation");
        s.act = activation_from_record(rec.act_kind, rec.act_alpha, rec.act_beta);
        if (j == 0) s.dims.push_back(rec.param.cols());
        s.dims.push_back(rec.param.rows());
        s.weights.push_back(rec.param);
        s.biases.push_back(rec.bias);
    }
    return s;
}

}  // namespace liftnet::checkpoint
