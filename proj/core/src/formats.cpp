#include "parawork/formats.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "parawork/error.hpp"

namespace parawork {

namespace {

// Next non-comment token; comments run from '#' to end of line.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  char c;
  while (in.get(c)) {
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      if (!tok.empty()) return true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return true;
      continue;
    }
    tok.push_back(c);
  }
  return !tok.empty();
}

std::uint64_t parse_u64(const std::string& tok, const char* what) {
  std::uint64_t v = 0;
  std::size_t used = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size() || tok[0] == '-') fail(ErrorKind::BadFormat, std::string("bad ") + what + ": '" + tok + "'");
  return v;
}

int parse_depth(std::istream& in, const char* magic) {
  std::string tok;
  if (!next_token(in, tok) || tok != magic) fail(ErrorKind::BadFormat, std::string("expected header ") + magic);
  if (!next_token(in, tok)) fail(ErrorKind::BadFormat, "missing depth");
  const auto m = parse_u64(tok, "depth");
  if (m > static_cast<std::uint64_t>(kMaxDepth))
    fail(ErrorKind::BadFormat, "depth " + tok + " exceeds " + std::to_string(kMaxDepth));
  return static_cast<int>(m);
}

// Exact value of "num/den" or "num/2^k" rounded once to double.
double parse_rational(const std::string& tok) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return static_cast<double>(parse_u64(tok, "weight"));
  const auto num = parse_u64(tok.substr(0, slash), "numerator");
  const std::string den = tok.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) {
    const auto k = parse_u64(den.substr(2), "exponent");
    if (k > 1100) fail(ErrorKind::BadFormat, "exponent too large: " + tok);
    return std::ldexp(static_cast<double>(num), -static_cast<int>(k));
  }
  const auto d = parse_u64(den, "denominator");
  if (d == 0) fail(ErrorKind::BadFormat, "zero denominator: " + tok);
  return static_cast<double>(num) / static_cast<double>(d);
}

// w = num / 2^k with num odd (or w = 0); exact for every finite double >= 0.
std::string dyadic_string(double w) {
  if (w == 0.0) return "0";
  int e = 0;
  const double frac = std::frexp(w, &e);  // w = frac 2^e, frac in [1/2, 1)
  auto num = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  int k = 53 - e;
  while (k > 0 && (num & 1u) == 0) {
    num >>= 1;
    --k;
  }
  if (k < 0) {
    if (-k >= 64 - static_cast<int>(std::bit_width(num))) fail(ErrorKind::BadFormat, "weight too large for rational encoding");
    num <<= -k;
    k = 0;
  }
  if (k == 0) return std::to_string(num);
  return std::to_string(num) + "/2^" + std::to_string(k);
}

template <class T, class F>
T with_input(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadFormat, "cannot open " + path.string());
  return f(in);
}

template <class F>
void with_output(const std::filesystem::path& path, F&& f) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::BadFormat, "cannot write " + path.string());
  f(out);
  out.flush();
  if (!out) fail(ErrorKind::BadFormat, "write failed for " + path.string());
}

}  // namespace

PointSet2 read_bits(const FieldCtx& ctx, std::istream& in) {
  PointSet2 a(ctx);
  const std::size_t n = a.cells();
  std::size_t i = 0;
  std::string tok;
  while (next_token(in, tok)) {
    for (char c : tok) {
      if (c != '0' && c != '1') fail(ErrorKind::BadFormat, std::string("unexpected character '") + c + "' in bit array");
      if (i >= n) fail(ErrorKind::BadFormat, "bit array longer than q^2 = " + std::to_string(n));
      if (c == '1') a.insert(i);
      ++i;
    }
  }
  if (i != n) fail(ErrorKind::BadFormat, "bit array has " + std::to_string(i) + " entries, expected " + std::to_string(n));
  return a;
}

void write_bits(const PointSet2& a, std::ostream& out) {
  const std::uint32_t q = a.q();
  std::string line(q, '0');
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t y = 0; y < q; ++y) line[y] = a.contains(x, y) ? '1' : '0';
    out << line << '\n';
  }
}

GridSet read_gridset(std::istream& in) {
  const int m = parse_depth(in, "GRIDSET");
  GridSet k(m);
  const std::uint64_t n = k.cells();
  std::uint64_t pos = 0;
  bool on = false;
  std::string tok;
  while (next_token(in, tok)) {
    const auto run = parse_u64(tok, "run length");
    if (run > n - pos) fail(ErrorKind::BadFormat, "runs exceed " + std::to_string(n) + " cells");
    if (on)
      for (std::uint64_t c = pos; c < pos + run; ++c) k.set(c);
    pos += run;
    on = !on;
  }
  if (pos != n) fail(ErrorKind::BadFormat, "runs cover " + std::to_string(pos) + " of " + std::to_string(n) + " cells");
  return k;
}

void write_gridset(const GridSet& k, std::ostream& out) {
  out << "GRIDSET " << k.depth() << '\n';
  const std::uint64_t n = k.cells();
  bool on = false;
  std::uint64_t pos = 0;
  bool first = true;
  while (pos < n) {
    std::uint64_t end = pos;
    while (end < n && k.test(end) == on) ++end;
    out << (first ? "" : " ") << (end - pos);
    first = false;
    pos = end;
    on = !on;
  }
  if (n == 0) out << 0;
  out << '\n';
}

GridMeasure read_gridmeasure(std::istream& in) {
  const int m = parse_depth(in, "GRIDMEASURE");
  std::string tok;
  if (!next_token(in, tok) || (tok != "rational" && tok != "double"))
    fail(ErrorKind::BadFormat, "expected 'rational' or 'double' after depth");
  const bool rational = tok == "rational";
  const std::uint64_t n = cells_at(m);
  std::vector<double> w;
  w.reserve(n);
  while (next_token(in, tok)) {
    if (w.size() == n) fail(ErrorKind::BadFormat, "more than " + std::to_string(n) + " weights");
    if (rational) {
      w.push_back(parse_rational(tok));
    } else {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size() || !std::isfinite(v) || v < 0.0)
        fail(ErrorKind::BadFormat, "bad weight '" + tok + "'");
      w.push_back(v);
    }
  }
  if (w.size() != n) fail(ErrorKind::BadFormat, "expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
  return GridMeasure(m, std::move(w));
}

void write_gridmeasure(const GridMeasure& mu, std::ostream& out, WeightEncoding enc) {
  out << "GRIDMEASURE " << mu.depth() << (enc == WeightEncoding::Rational ? " rational" : " double") << '\n';
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (double w : mu.weights()) {
    if (enc == WeightEncoding::Rational)
      buf << dyadic_string(w) << '\n';
    else
      buf << w << '\n';
  }
  out << buf.str();
}

PointSet2 load_bits(const FieldCtx& ctx, const std::filesystem::path& path) {
  return with_input<PointSet2>(path, [&](std::istream& in) { return read_bits(ctx, in); });
}
void save_bits(const PointSet2& a, const std::filesystem::path& path) {
  with_output(path, [&](std::ostream& out) { write_bits(a, out); });
}
GridSet load_gridset(const std::filesystem::path& path) {
  return with_input<GridSet>(path, [](std::istream& in) { return read_gridset(in); });
}
void save_gridset(const GridSet& k, const std::filesystem::path& path) {
  with_output(path, [&](std::ostream& out) { write_gridset(k, out); });
}
GridMeasure load_gridmeasure(const std::filesystem::path& path) {
  return with_input<GridMeasure>(path, [](std::istream& in) { return read_gridmeasure(in); });
}
void save_gridmeasure(const GridMeasure& mu, const std::filesystem::path& path, WeightEncoding enc) {
  with_output(path, [&](std::ostream& out) { write_gridmeasure(mu, out, enc); });
}

}  // namespace parawork
