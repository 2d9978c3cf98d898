// Serialization helpers: round-trip-exact CSV formatting, the versioned
// binary checkpoint format, and the content hash used by run manifests.
//
// Checkpoint layout (version 1, fixed little-endian):
//   bytes 0..7   magic "CQSCKPT1"
//   bytes 8..15  u64 header length H
//   H bytes      JSON header: format_version, grid {L, n}, time, params
//   payload      2 * n * 16 bytes: doubles (re, im) for u, then v

#pragma once

#include "cqs/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cqs {

// %.17g: enough digits to reproduce any double exactly, locale-free
std::string format_double(double value);

struct CsvBuilder {
    std::string text;

    explicit CsvBuilder(const std::string& header) : text(header + "\n") {}
    void row(const std::vector<std::string>& cells);
};

std::uint64_t fnv1a64(const void* data, std::size_t length);
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

struct CheckpointMeta {
    int format_version = 1;
    double time = 0.0;
    ModelParams params;
};

struct LoadedCheckpoint {
    FieldPair state;
    CheckpointMeta meta;
};

// rejects non-finite samples; the round trip is bitwise exact
std::string encode_checkpoint(const FieldPair& state, const CheckpointMeta& meta);
LoadedCheckpoint decode_checkpoint(const std::string& bytes);

void write_checkpoint(const std::filesystem::path& path, const FieldPair& state,
                      const CheckpointMeta& meta);
LoadedCheckpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace cqs
