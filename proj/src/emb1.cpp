#include "damteval/emb1.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "damteval/errors.hpp"

namespace damteval {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};

bool is_reserved(const std::string& token) { return token == "[CLS]" || token == "[SEP]"; }

class Reader {
  public:
    Reader(std::span<const std::byte> bytes, const std::string& source) : bytes_(bytes), source_(source) {}

    std::size_t offset() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ == bytes_.size(); }

    template <typename T>
    T read_uint(const char* what) {
        need(sizeof(T), what);
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<T>(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return v;
    }

    float read_float(const char* what) { return std::bit_cast<float>(read_uint<std::uint32_t>(what)); }

    std::string read_string(std::size_t n, const char* what) {
        need(n, what);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    [[noreturn]] void error(const std::string& message) const {
        fail(ErrorCode::FormatError, source_ + ": " + message + " at byte offset " + std::to_string(pos_));
    }

  private:
    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            fail(ErrorCode::FormatError, source_ + ": truncated payload while reading " + what +
                                             " at byte offset " + std::to_string(pos_) + " (needed " +
                                             std::to_string(n) + " bytes, " +
                                             std::to_string(bytes_.size() - pos_) + " left)");
        }
    }

    std::span<const std::byte> bytes_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

class Writer {
  public:
    template <typename T>
    void put_uint(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
    }
    void put_float(float f) { put_uint(std::bit_cast<std::uint32_t>(f)); }
    void put_bytes(std::string_view s) {
        for (char c : s) out_.push_back(static_cast<std::byte>(c));
    }
    std::vector<std::byte> take() { return std::move(out_); }

  private:
    std::vector<std::byte> out_;
};

}  // namespace

EmbeddingFile parse_emb1(std::span<const std::byte> bytes, const std::string& source) {
    Reader in(bytes, source);
    if (bytes.size() < kMagic.size() ||
        std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        fail(ErrorCode::FormatError, source + ": not an EMB1 file");
    }
    in.read_string(kMagic.size(), "magic");
    const auto version = in.read_uint<std::uint16_t>("version");
    if (version != kEmb1Version) in.error("unsupported EMB1 version " + std::to_string(version));
    EmbeddingFile file;
    file.dim = in.read_uint<std::uint32_t>("dimension");
    if (file.dim == 0) in.error("embedding dimension is 0");
    const auto count = in.read_uint<std::uint32_t>("record count");

    file.records.reserve(std::min<std::size_t>(count, 1u << 16));
    for (std::uint32_t r = 0; r < count; ++r) {
        const std::size_t record_start = in.offset();
        EmbeddingRecord rec;
        rec.segment_index = in.read_uint<std::uint32_t>("segment index");
        if (r == 0 && rec.segment_index != 0) in.error("first segment index is " + std::to_string(rec.segment_index) + ", expected 0");
        if (r > 0 && rec.segment_index <= file.records.back().segment_index) {
            in.error("segment index " + std::to_string(rec.segment_index) + " does not increase");
        }
        const auto n_tokens = in.read_uint<std::uint32_t>("token count");
        std::vector<std::string> tokens;
        tokens.reserve(std::min<std::size_t>(n_tokens, 1u << 16));
        for (std::uint32_t t = 0; t < n_tokens; ++t) {
            const auto len = in.read_uint<std::uint16_t>("token length");
            tokens.push_back(in.read_string(len, "token bytes"));
            if (is_reserved(tokens.back())) {
                in.error("record for segment " + std::to_string(rec.segment_index) + " contains reserved token " +
                         tokens.back());
            }
        }
        const std::size_t n_values = static_cast<std::size_t>(n_tokens) * file.dim;
        if (n_values > (bytes.size() - in.offset()) / sizeof(float)) {
            in.error("token count " + std::to_string(n_tokens) + " x dimension " + std::to_string(file.dim) +
                     " exceeds the remaining payload (truncated matrix)");
        }
        std::vector<float> values(n_values);
        for (auto& v : values) {
            v = in.read_float("embedding values");
            if (!std::isfinite(v)) in.error("non-finite embedding value");
        }
        try {
            rec.embedding = SegmentEmbedding(std::move(tokens), file.dim, std::move(values));
        } catch (const Error& e) {
            fail(e.code(), source + ": record at byte offset " + std::to_string(record_start) + ": " + e.what());
        }
        file.records.push_back(std::move(rec));
    }
    if (!in.at_end()) {
        in.error("trailing bytes after " + std::to_string(count) + " declared records");
    }
    return file;
}

std::vector<std::byte> serialize_emb1(const EmbeddingFile& file) {
    Writer out;
    out.put_bytes(std::string_view(kMagic.data(), kMagic.size()));
    out.put_uint<std::uint16_t>(kEmb1Version);
    out.put_uint<std::uint32_t>(file.dim);
    out.put_uint<std::uint32_t>(static_cast<std::uint32_t>(file.records.size()));
    for (const auto& rec : file.records) {
        const auto& emb = rec.embedding;
        if (emb.dim() != file.dim) {
            fail(ErrorCode::DimensionMismatch, "record for segment " + std::to_string(rec.segment_index) +
                                                   " has dimension " + std::to_string(emb.dim()) +
                                                   ", file declares " + std::to_string(file.dim));
        }
        out.put_uint<std::uint32_t>(rec.segment_index);
        out.put_uint<std::uint32_t>(static_cast<std::uint32_t>(emb.size()));
        for (const auto& tok : emb.tokens()) {
            if (tok.size() > std::numeric_limits<std::uint16_t>::max()) {
                fail(ErrorCode::FormatError, "token longer than 65535 bytes");
            }
            out.put_uint<std::uint16_t>(static_cast<std::uint16_t>(tok.size()));
            out.put_bytes(tok);
        }
        for (float v : emb.values()) out.put_float(v);
    }
    return out.take();
}

EmbeddingFile read_emb1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, path.string() + ": cannot open");
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_emb1(std::as_bytes(std::span<const char>(raw)), path.string());
}

void write_emb1(const EmbeddingFile& file, const std::filesystem::path& path) {
    const auto bytes = serialize_emb1(file);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::IoError, path.string() + ": write failed");
}

}  // namespace damteval
