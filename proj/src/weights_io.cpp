#include "geonas/weights_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "geonas/hash.hpp"

namespace geonas::nn {

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; raw writes assume a little-endian host");

namespace {

constexpr char kMagic[4] = {'G', 'N', 'W', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!f) throw IoError("weight file truncated");
    return v;
}

}  // namespace

void save_weights_file(const std::filesystem::path& path, const Network& net) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open weight file for writing: " + path.string());
    f.write(kMagic, 4);
    put<uint32_t>(f, kVersion);
    put<uint64_t>(f, fnv1a64(net.id()));
    put<uint32_t>(f, static_cast<uint32_t>(net.in_channels()));
    put<uint32_t>(f, static_cast<uint32_t>(net.in_length()));
    put<uint32_t>(f, static_cast<uint32_t>(net.output_dim()));

    auto blocks = const_cast<Network&>(net).param_blocks();
    put<uint32_t>(f, static_cast<uint32_t>(blocks.size()));
    for (const auto& b : blocks) {
        put<uint64_t>(f, static_cast<uint64_t>(b.weights.size()));
        f.write(reinterpret_cast<const char*>(b.weights.data()),
                static_cast<std::streamsize>(b.weights.size() * sizeof(double)));
    }
    if (!f) throw IoError("failed writing weight file: " + path.string());
}

void load_weights_file(const std::filesystem::path& path, Network& net) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open weight file: " + path.string());
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a weight file: " + path.string());
    if (get<uint32_t>(f) != kVersion) throw IoError("unsupported weight file version");
    if (get<uint64_t>(f) != fnv1a64(net.id()))
        throw IoError("weight file was written for a different architecture than '" + net.id() +
                      "'");
    if (get<uint32_t>(f) != static_cast<uint32_t>(net.in_channels()) ||
        get<uint32_t>(f) != static_cast<uint32_t>(net.in_length()) ||
        get<uint32_t>(f) != static_cast<uint32_t>(net.output_dim()))
        throw IoError("weight file dims do not match the network");

    auto blocks = net.param_blocks();
    if (get<uint32_t>(f) != static_cast<uint32_t>(blocks.size()))
        throw IoError("weight file block count mismatch");
    for (auto& b : blocks) {
        if (get<uint64_t>(f) != b.weights.size())
            throw IoError("weight file block size mismatch");
        f.read(reinterpret_cast<char*>(b.weights.data()),
               static_cast<std::streamsize>(b.weights.size() * sizeof(double)));
        if (!f) throw IoError("weight file truncated");
    }
}

}  // namespace geonas::nn
