#include "idt/pairs.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "idt/error.hpp"

namespace idt {

std::string_view to_string(Subset subset) {
  return subset == Subset::Idiom ? "idiom" : "sts";
}

std::optional<Subset> parse_subset(std::string_view s) {
  if (s == "idiom") return Subset::Idiom;
  if (s == "sts") return Subset::Sts;
  return std::nullopt;
}

namespace {

constexpr std::string_view kHeader = "sentence1\tsentence2\tgold_score\tsubset\tlanguage";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string format_score(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_field(std::string_view value, std::string_view name) {
  if (value.find_first_of("\t\n\r") != std::string_view::npos) {
    throw DataError("eval pair field " + std::string(name) + " contains a tab or newline");
  }
}

}  // namespace

std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open eval pairs file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file, expected a header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError(path.string() + ": bad header, expected \"" + std::string(kHeader) + "\"");
  }
  std::vector<EvalPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = [&] { return path.string() + ": line " + std::to_string(line_no) + ": "; };
    const auto cols = split_tabs(line);
    if (cols.size() != 5) {
      throw DataError(where() + "expected 5 tab-separated columns, found " +
                      std::to_string(cols.size()));
    }
    EvalPair p;
    p.sentence1 = std::string(cols[0]);
    p.sentence2 = std::string(cols[1]);
    const auto score = cols[2];
    const auto res = std::from_chars(score.data(), score.data() + score.size(), p.gold_score);
    if (res.ec != std::errc{} || res.ptr != score.data() + score.size()) {
      throw DataError(where() + "gold_score is not a number: \"" + std::string(score) + "\"");
    }
    if (!(p.gold_score >= 0.0 && p.gold_score <= 1.0)) {
      throw DataError(where() + "gold_score outside [0, 1]");
    }
    const auto subset = parse_subset(cols[3]);
    if (!subset) throw DataError(where() + "subset must be idiom or sts");
    p.subset = *subset;
    p.language = std::string(cols[4]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void save_eval_pairs(const std::filesystem::path& path, std::span<const EvalPair> pairs) {
  std::ostringstream buf;
  buf << kHeader << '\n';
  for (const auto& p : pairs) {
    check_field(p.sentence1, "sentence1");
    check_field(p.sentence2, "sentence2");
    check_field(p.language, "language");
    buf << p.sentence1 << '\t' << p.sentence2 << '\t' << format_score(p.gold_score) << '\t'
        << to_string(p.subset) << '\t' << p.language << '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write eval pairs file " + path.string());
  out << buf.str();
  if (!out) throw DataError("failed writing eval pairs file " + path.string());
}

}  // namespace idt
