#include "idt/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "idt/error.hpp"
#include "json.hpp"

namespace idt {

namespace {

constexpr char kMagic[4] = {'I', 'D', 'T', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_floats(std::string& out, std::span<const double> values) {
  for (double v : values) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  const unsigned char* take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw DataError(path_.string() + ": truncated checkpoint");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data()) + pos_;
    pos_ += n;
    return p;
  }

  void floats(std::span<double> out) {
    const unsigned char* p = take(4 * out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<double>(std::bit_cast<float>(get_u32(p + 4 * i)));
    }
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Vocab& vocab,
                     const EncoderParams& params) {
  params.validate();
  if (vocab.size() != params.vocab_size()) {
    throw InvalidArgument("vocabulary size " + std::to_string(vocab.size()) +
                          " does not match embedding rows " + std::to_string(params.vocab_size()));
  }
  const nlohmann::json header = {{"dim", params.dim()},
                                 {"has_projection", params.projection.has_value()},
                                 {"vocab", vocab.tokens()}};
  const std::string header_text = header.dump();
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  put_floats(out, params.embeddings.values());
  if (params.projection) {
    put_floats(out, params.projection->weight.values());
    put_floats(out, params.projection->bias);
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write checkpoint " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw DataError("failed writing checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Reader r(bytes, path);
  if (std::memcmp(r.take(4), kMagic, 4) != 0) {
    throw DataError(path.string() + ": not a checkpoint (bad magic)");
  }
  const std::uint32_t header_len = get_u32(r.take(4));
  const auto* header_bytes = r.take(header_len);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_bytes, header_bytes + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": malformed checkpoint header (" + e.what() + ")");
  }

  Model m;
  std::size_t dim = 0;
  bool has_projection = false;
  try {
    dim = header.at("dim").get<std::size_t>();
    has_projection = header.at("has_projection").get<bool>();
    m.vocab = Vocab(header.at("vocab").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad checkpoint header field (" + e.what() + ")");
  } catch (const InvalidArgument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (dim < 2) throw DataError(path.string() + ": checkpoint dim must be at least 2");

  m.params.embeddings = Matrix(m.vocab.size(), dim);
  r.floats(m.params.embeddings.values());
  if (has_projection) {
    Projection proj{Matrix(dim, dim), std::vector<double>(dim)};
    r.floats(proj.weight.values());
    r.floats(proj.bias);
    m.params.projection = std::move(proj);
  }
  if (!r.done()) throw DataError(path.string() + ": trailing bytes after checkpoint payload");
  try {
    m.params.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace idt
