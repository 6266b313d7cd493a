#include "fiedcmg/graph_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace fiedcmg {

namespace {

struct RawEntry {
  std::size_t row;  // 0-based, as written
  std::size_t col;
  double value;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on blanks/tabs without allocating.
class Tokens {
 public:
  explicit Tokens(std::string_view s) : rest_(s) {}

  bool next(std::string_view& tok) {
    const auto first = rest_.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return false;
    rest_.remove_prefix(first);
    const auto end = rest_.find_first_of(" \t\r");
    tok = rest_.substr(0, end);
    rest_.remove_prefix(end == std::string_view::npos ? rest_.size() : end);
    return true;
  }

 private:
  std::string_view rest_;
};

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in)
      : data_(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()) {}

  bool next(std::string_view& line) {
    if (pos_ >= data_.size()) return false;
    const auto end = data_.find('\n', pos_);
    const auto stop = end == std::string::npos ? data_.size() : end;
    line = std::string_view(data_).substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++line_no_;
    return true;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

// Turns raw coordinate entries into an EdgeList following the loader's
// duplicate conventions. Diagonal entries must already be removed.
EdgeList merge_entries(std::size_t n, std::vector<RawEntry>& entries, const std::string& source) {
  struct Keyed {
    std::size_t a, b;
    double w;
    std::size_t line;
  };
  std::vector<Keyed> upper, lower_;
  for (const auto& e : entries) {
    if (e.row < e.col) {
      upper.push_back({e.row, e.col, e.value, e.line});
    } else {
      lower_.push_back({e.col, e.row, e.value, e.line});
    }
  }
  const auto by_key = [](const Keyed& x, const Keyed& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  };
  const auto collapse = [&](std::vector<Keyed>& v) {
    std::stable_sort(v.begin(), v.end(), by_key);
    std::vector<Keyed> out;
    for (const auto& k : v) {
      if (!out.empty() && out.back().a == k.a && out.back().b == k.b) {
        out.back().w += k.w;
      } else {
        out.push_back(k);
      }
    }
    v = std::move(out);
  };
  collapse(upper);
  collapse(lower_);

  std::vector<Edge> edges;
  edges.reserve(std::max(upper.size(), lower_.size()));
  std::size_t p = 0, q = 0;
  while (p < upper.size() || q < lower_.size()) {
    if (q == lower_.size() || (p < upper.size() && by_key(upper[p], lower_[q]))) {
      edges.push_back({static_cast<VertexId>(upper[p].a), static_cast<VertexId>(upper[p].b),
                       upper[p].w});
      ++p;
    } else if (p == upper.size() || by_key(lower_[q], upper[p])) {
      edges.push_back({static_cast<VertexId>(lower_[q].a), static_cast<VertexId>(lower_[q].b),
                       lower_[q].w});
      ++q;
    } else {
      const double u = upper[p].w;
      const double l = lower_[q].w;
      if (std::abs(u - l) > 1e-9 * std::max(std::abs(u), std::abs(l))) {
        throw ParseError(source, std::max(upper[p].line, lower_[q].line),
                         fmt::format("entries ({}, {}) and ({}, {}) disagree: {} vs {}",
                                     upper[p].a + 1, upper[p].b + 1, upper[p].b + 1,
                                     upper[p].a + 1, u, l));
      }
      edges.push_back({static_cast<VertexId>(upper[p].a), static_cast<VertexId>(upper[p].b), u});
      ++p;
      ++q;
    }
  }
  return EdgeList::from_edges(n, std::move(edges));
}

void report_self_loops(std::size_t count, std::size_t first_line, const std::string& source,
                       const WarningSink& warn) {
  if (count == 0 || !warn) return;
  warn(fmt::format("{}: dropped {} self-loop entr{} (first at line {})", source, count,
                   count == 1 ? "y" : "ies", first_line));
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& reason)
    : Error(fmt::format("{}:{}: {}", source, line, reason)), line_(line) {}

void warn_to_stderr(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

GraphFormat parse_format(std::string_view name) {
  const auto s = lower(name);
  if (s == "auto") return GraphFormat::Auto;
  if (s == "mm" || s == "mtx" || s == "matrix-market" || s == "matrixmarket") {
    return GraphFormat::MatrixMarket;
  }
  if (s == "edgelist" || s == "edge-list" || s == "el") return GraphFormat::EdgeListText;
  throw Error(fmt::format("unknown graph format '{}'", name));
}

EdgeList read_matrix_market(std::istream& in, const std::string& source, const WarningSink& warn) {
  LineReader reader(in);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(source, 1, "empty file");

  std::vector<std::string> header;
  {
    Tokens toks(line);
    std::string_view t;
    while (toks.next(t)) header.push_back(lower(t));
  }
  if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix") {
    throw ParseError(source, 1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  if (header[2] != "coordinate") {
    throw ParseError(source, 1, fmt::format("unsupported storage '{}'", header[2]));
  }
  const std::string& field = header[3];
  const std::string& symmetry = header[4];
  if (field != "real" && field != "integer" && field != "pattern") {
    throw ParseError(source, 1, fmt::format("unsupported field '{}'", field));
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw ParseError(source, 1, fmt::format("unsupported symmetry '{}'", symmetry));
  }
  const bool pattern = field == "pattern";

  std::size_t rows = 0, cols = 0, declared = 0;
  bool have_size = false;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    Tokens toks(t);
    std::string_view a, b, c, extra;
    if (!toks.next(a) || !toks.next(b) || !toks.next(c) || toks.next(extra) ||
        !parse_number(a, rows) || !parse_number(b, cols) || !parse_number(c, declared)) {
      throw ParseError(source, reader.line_no(), "expected size line '<rows> <cols> <entries>'");
    }
    have_size = true;
    break;
  }
  if (!have_size) throw ParseError(source, reader.line_no(), "missing size line");
  if (rows != cols) {
    throw ParseError(source, reader.line_no(),
                     fmt::format("matrix is not square ({} x {})", rows, cols));
  }
  if (rows == 0) throw ParseError(source, reader.line_no(), "graph has zero vertices");
  if (rows > std::numeric_limits<VertexId>::max()) {
    throw ParseError(source, reader.line_no(), "too many vertices");
  }

  std::vector<RawEntry> off;
  off.reserve(declared);
  std::size_t diag_count = 0, diag_first = 0, seen = 0;
  bool any_negative = false, any_positive = false;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    Tokens toks(t);
    std::string_view ti, tj, tv, extra;
    std::size_t i = 0, j = 0;
    double v = 1.0;
    if (!toks.next(ti) || !toks.next(tj) || !parse_number(ti, i) || !parse_number(tj, j)) {
      throw ParseError(source, reader.line_no(), "expected '<row> <col>' indices");
    }
    if (!pattern) {
      if (!toks.next(tv) || !parse_number(tv, v)) {
        throw ParseError(source, reader.line_no(), "expected numeric value");
      }
    }
    if (toks.next(extra)) throw ParseError(source, reader.line_no(), "trailing tokens");
    if (i < 1 || j < 1 || i > rows || j > rows) {
      throw ParseError(source, reader.line_no(), fmt::format("index ({}, {}) out of range", i, j));
    }
    if (!std::isfinite(v)) throw ParseError(source, reader.line_no(), "non-finite value");
    ++seen;
    if (i == j) {
      if (diag_count++ == 0) diag_first = reader.line_no();
      continue;
    }
    if (v == 0.0) throw ParseError(source, reader.line_no(), "zero-weight edge");
    (v < 0.0 ? any_negative : any_positive) = true;
    off.push_back({i - 1, j - 1, v, reader.line_no()});
  }
  if (seen != declared) {
    throw ParseError(source, reader.line_no(),
                     fmt::format("expected {} entries, found {}", declared, seen));
  }
  if (any_negative && any_positive) {
    throw ParseError(source, reader.line_no(),
                     "off-diagonal entries of mixed sign: neither adjacency nor Laplacian");
  }
  if (any_negative) {
    // Laplacian input: diagonal entries are degrees, not self-loops.
    for (auto& e : off) e.value = -e.value;
  } else {
    report_self_loops(diag_count, diag_first, source, warn);
  }
  return merge_entries(rows, off, source);
}

EdgeList read_edge_list(std::istream& in, const std::string& source, const WarningSink& warn) {
  LineReader reader(in);
  std::string_view line;
  std::size_t declared_n = 0;
  bool have_n = false;
  std::size_t max_id = 0, loops = 0, loop_first = 0;
  std::vector<RawEntry> off;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#' || t.front() == '%') {
      auto body = trim(t.substr(1));
      if (body.starts_with("n=") || body.starts_with("n =")) {
        body = trim(body.substr(body.find('=') + 1));
        if (!parse_number(body, declared_n)) {
          throw ParseError(source, reader.line_no(), "malformed '# n=<count>' header");
        }
        have_n = true;
      }
      continue;
    }
    Tokens toks(t);
    std::string_view ti, tj, tw, extra;
    std::size_t i = 0, j = 0;
    double w = 1.0;
    if (!toks.next(ti) || !toks.next(tj) || !parse_number(ti, i) || !parse_number(tj, j)) {
      throw ParseError(source, reader.line_no(), "expected 'i j [w]'");
    }
    if (toks.next(tw) && !parse_number(tw, w)) {
      throw ParseError(source, reader.line_no(), "malformed weight");
    }
    if (toks.next(extra)) throw ParseError(source, reader.line_no(), "trailing tokens");
    if (i < 1 || j < 1) throw ParseError(source, reader.line_no(), "vertex ids are 1-based");
    if (!std::isfinite(w) || w <= 0.0) {
      throw ParseError(source, reader.line_no(), "edge weight must be positive");
    }
    max_id = std::max({max_id, i, j});
    if (i == j) {
      if (loops++ == 0) loop_first = reader.line_no();
      continue;
    }
    off.push_back({i - 1, j - 1, w, reader.line_no()});
  }
  const std::size_t n = have_n ? declared_n : max_id;
  if (have_n && max_id > declared_n) {
    throw ParseError(source, reader.line_no(),
                     fmt::format("vertex id {} exceeds declared n={}", max_id, declared_n));
  }
  if (n == 0) throw ParseError(source, reader.line_no(), "graph has zero vertices");
  if (n > std::numeric_limits<VertexId>::max()) {
    throw ParseError(source, reader.line_no(), "too many vertices");
  }
  report_self_loops(loops, loop_first, source, warn);
  return merge_entries(n, off, source);
}

EdgeList load_graph(const std::filesystem::path& path, GraphFormat format, const WarningSink& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  if (format == GraphFormat::Auto) {
    std::string first;
    std::getline(in, first);
    in.clear();
    in.seekg(0);
    format = first.starts_with("%%MatrixMarket") || path.extension() == ".mtx"
                 ? GraphFormat::MatrixMarket
                 : GraphFormat::EdgeListText;
  }
  const auto source = path.string();
  return format == GraphFormat::MatrixMarket ? read_matrix_market(in, source, warn)
                                             : read_edge_list(in, source, warn);
}

void write_matrix_market(std::ostream& out, const EdgeList& g) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << g.n << ' ' << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) out << fmt::format("{} {} {}\n", e.j + 1, e.i + 1, e.w);
}

void write_vector_f64(const std::filesystem::path& path, std::span<const double> x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  for (const double v : x) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    out.write(buf, 8);
  }
}

Vector read_vector_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  Vector x;
  char buf[8];
  while (in.read(buf, 8)) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b])) << (8 * b);
    }
    x.push_back(std::bit_cast<double>(bits));
  }
  if (in.gcount() != 0) throw Error(fmt::format("'{}' is not a whole number of float64", path.string()));
  return x;
}

}  // namespace fiedcmg
