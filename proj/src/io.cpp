#include "cqs/io.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cqs {

namespace {

constexpr char kMagic[9] = "CQSCKPT1";

void put_u64le(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64le(const std::string& bytes, std::size_t offset) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i)
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
                 << (8 * i);
    return value;
}

void put_f64le(std::string& out, double x) { put_u64le(out, std::bit_cast<std::uint64_t>(x)); }

double get_f64le(const std::string& bytes, std::size_t offset) {
    return std::bit_cast<double>(get_u64le(bytes, offset));
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text.push_back(',');
        text += cells[i];
    }
    text.push_back('\n');
}

std::uint64_t fnv1a64(const void* data, std::size_t length) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 14695981039346656037ULL;
    for (std::size_t i = 0; i < length; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buffer;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string encode_checkpoint(const FieldPair& state, const CheckpointMeta& meta) {
    check_pair(state);
    if (!all_finite(state.u) || !all_finite(state.v))
        throw std::runtime_error("refusing to checkpoint a non-finite state");
    if (meta.format_version != 1) throw std::runtime_error("unsupported checkpoint version");

    nlohmann::json header;
    header["format_version"] = meta.format_version;
    header["grid"] = {{"L", state.u.grid->box_length}, {"n", state.u.grid->num_points}};
    header["time"] = meta.time;
    header["params"] = {{"p", meta.params.p},
                        {"q", meta.params.q},
                        {"sigma", meta.params.sigma},
                        {"theta", meta.params.theta},
                        {"alpha", meta.params.alpha},
                        {"n1_coefficient", meta.params.n1_coefficient},
                        {"n2_coefficient", meta.params.n2_coefficient}};
    std::string header_text = header.dump();

    std::string out;
    out.reserve(16 + header_text.size() + 32 * state.u.samples.size());
    out.append(kMagic, 8);
    put_u64le(out, header_text.size());
    out += header_text;
    for (const ComplexField* field : {&state.u, &state.v})
        for (const Complex& z : field->samples) {
            put_f64le(out, z.real());
            put_f64le(out, z.imag());
        }
    return out;
}

LoadedCheckpoint decode_checkpoint(const std::string& bytes) {
    if (bytes.size() < 16 || bytes.compare(0, 8, kMagic, 8) != 0)
        throw std::runtime_error("not a checkpoint file");
    std::uint64_t header_len = get_u64le(bytes, 8);
    if (16 + header_len > bytes.size()) throw std::runtime_error("truncated checkpoint header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.substr(16, header_len));
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("malformed checkpoint header");
    }
    CheckpointMeta meta;
    try {
        meta.format_version = header.at("format_version").get<int>();
        if (meta.format_version != 1) throw std::runtime_error("unsupported checkpoint version");
        meta.time = header.at("time").get<double>();
        const auto& jp = header.at("params");
        meta.params.p = jp.at("p").get<int>();
        meta.params.q = jp.at("q").get<int>();
        meta.params.sigma = jp.at("sigma").get<double>();
        meta.params.theta = jp.at("theta").get<double>();
        meta.params.alpha = jp.at("alpha").get<double>();
        meta.params.n1_coefficient = jp.at("n1_coefficient").get<double>();
        meta.params.n2_coefficient = jp.at("n2_coefficient").get<double>();

        double L = header.at("grid").at("L").get<double>();
        int n = header.at("grid").at("n").get<int>();
        GridPtr grid = make_grid(L, n);

        std::size_t payload_offset = 16 + header_len;
        std::size_t expected = 2ull * static_cast<std::size_t>(n) * 16ull;
        if (bytes.size() - payload_offset != expected)
            throw std::runtime_error("checkpoint payload length does not match its header");

        FieldPair state = make_pair(grid);
        std::size_t offset = payload_offset;
        for (ComplexField* field : {&state.u, &state.v})
            for (Complex& z : field->samples) {
                z = Complex{get_f64le(bytes, offset), get_f64le(bytes, offset + 8)};
                offset += 16;
            }
        if (!all_finite(state.u) || !all_finite(state.v))
            throw std::runtime_error("checkpoint contains non-finite samples");
        return LoadedCheckpoint{std::move(state), meta};
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("checkpoint header is missing required fields");
    }
}

void write_checkpoint(const std::filesystem::path& path, const FieldPair& state,
                      const CheckpointMeta& meta) {
    write_file(path, encode_checkpoint(state, meta));
}

LoadedCheckpoint read_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(read_file(path));
}

}  // namespace cqs
