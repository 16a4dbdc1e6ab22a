#pragma once

// EMB1: little-endian container for per-segment token embeddings.
//
//   header : "EMB1" | u16 version (=1) | u32 dim | u32 record_count
//   record : u32 segment_index | u32 token_count
//            | token_count x (u16 byte_length | UTF-8 bytes)
//            | token_count * dim float32, row-major
//
// Segment indices start at 0 and are strictly increasing. Tokens "[CLS]" and
// "[SEP]" are reserved and rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "damteval/similarity.hpp"

namespace damteval {

inline constexpr std::uint16_t kEmb1Version = 1;

struct EmbeddingRecord {
    std::uint32_t segment_index = 0;
    SegmentEmbedding embedding;

    friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

struct EmbeddingFile {
    std::uint32_t dim = 1;
    std::vector<EmbeddingRecord> records;
};

// `source` names the origin in error messages.
EmbeddingFile parse_emb1(std::span<const std::byte> bytes, const std::string& source = "<memory>");
std::vector<std::byte> serialize_emb1(const EmbeddingFile& file);

EmbeddingFile read_emb1(const std::filesystem::path& path);
void write_emb1(const EmbeddingFile& file, const std::filesystem::path& path);

}  // namespace damteval
