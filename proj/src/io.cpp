#include "sostensor/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace sostensor {

namespace {

using boost::multiprecision::cpp_int;

std::vector<std::string> split_fields(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// cpp_int reads a leading 0 as an octal prefix.
cpp_int decimal(std::string_view digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return cpp_int(0);
  return cpp_int(std::string(digits.substr(first)));
}

cpp_int pow10(int e) {
  cpp_int r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

int parse_int_field(const std::string& tok, int line, const char* what) {
  int v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'", line);
  return v;
}

struct Header {
  std::string kind;
  int m = 0;
  int n = 0;
};

// Reads up to and including the header line; returns the line number reached.
Header read_header(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 3 || (f[0] != "tensor" && f[0] != "poly"))
      throw ParseError("expected header 'tensor <m> <n>' or 'poly <m> <n>'", lineno);
    Header h{f[0], parse_int_field(f[1], lineno, "order"), parse_int_field(f[2], lineno, "dimension")};
    if (h.kind == "tensor" && h.m < 1) throw ParseError("tensor order must be positive", lineno);
    if (h.kind == "poly" && h.m < 0) throw ParseError("polynomial degree must be nonnegative", lineno);
    if (h.n < 1) throw ParseError("dimension must be positive", lineno);
    return h;
  }
  throw ParseError("empty input: missing header");
}

ExactTensor read_tensor_body(std::istream& in, const Header& h, int lineno) {
  ExactTensor a(h.m, h.n);
  std::set<MultiIndex> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = split_fields(line);
    if (f.empty()) continue;
    if (static_cast<int>(f.size()) != h.m + 1)
      throw ParseError("expected " + std::to_string(h.m) + " indices and a value", lineno);
    MultiIndex idx(h.m);
    for (int p = 0; p < h.m; ++p) {
      int i = parse_int_field(f[p], lineno, "index");
      if (i < 1 || i > h.n)
        throw ParseError("index " + std::to_string(i) + " outside [1, " + std::to_string(h.n) + "]", lineno);
      idx[p] = i - 1;
    }
    Rational v;
    try {
      v = parse_rational(f[h.m]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    auto c = canonicalize(idx, h.n);
    if (!seen.insert(c.index).second) throw ParseError("duplicate entry for a permutation of an earlier index", lineno);
    a.set(c.index, v);
  }
  return a;
}

ExactPolynomial read_polynomial_body(std::istream& in, const Header& h, int lineno) {
  ExactPolynomial f(h.m, h.n);
  std::set<Exponent> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (static_cast<int>(fields.size()) != h.n + 1)
      throw ParseError("expected a coefficient and " + std::to_string(h.n) + " exponents", lineno);
    Rational c;
    try {
      c = parse_rational(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    Exponent alpha(h.n);
    int total = 0;
    for (int j = 0; j < h.n; ++j) {
      alpha[j] = parse_int_field(fields[j + 1], lineno, "exponent");
      if (alpha[j] < 0) throw ParseError("negative exponent", lineno);
      total += alpha[j];
    }
    if (total != h.m)
      throw ParseError("term of degree " + std::to_string(total) + " in a homogeneous polynomial of degree " +
                           std::to_string(h.m),
                       lineno);
    if (!seen.insert(alpha).second) throw ParseError("duplicate exponent vector", lineno);
    f.set_term(alpha, c);
  }
  return f;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    std::string den_s = s.substr(slash + 1);
    if (!all_digits(den_s)) throw ParseError("malformed fraction '" + s + "'");
    cpp_int den = decimal(den_s);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    if (denominator(num) != 1) throw ParseError("malformed fraction '" + s + "'");
    return num / Rational(den);
  }
  std::size_t p = 0;
  bool neg = false;
  if (s[p] == '+' || s[p] == '-') neg = s[p++] == '-';
  std::string int_part, frac_part;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) int_part += s[p++];
  if (p < s.size() && s[p] == '.') {
    ++p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) frac_part += s[p++];
  }
  if (int_part.empty() && frac_part.empty()) throw ParseError("malformed number '" + s + "'");
  int exp10 = 0;
  if (p < s.size() && (s[p] == 'e' || s[p] == 'E')) {
    ++p;
    std::string e = s.substr(p);
    auto res = std::from_chars(e.data(), e.data() + e.size(), exp10);
    if (e.empty() || e[0] == '+' || res.ec != std::errc() || res.ptr != e.data() + e.size()) {
      // from_chars rejects a leading '+'
      if (!e.empty() && e[0] == '+' && e.size() > 1 && all_digits(e.substr(1)))
        exp10 = std::stoi(e.substr(1));
      else
        throw ParseError("malformed exponent in '" + s + "'");
    }
    if (exp10 > 4000 || exp10 < -4000) throw ParseError("exponent out of range in '" + s + "'");
    p = s.size();
  }
  if (p != s.size()) throw ParseError("malformed number '" + s + "'");
  cpp_int mant = decimal(int_part);
  if (!frac_part.empty()) mant = mant * pow10(static_cast<int>(frac_part.size())) + decimal(frac_part);
  exp10 -= static_cast<int>(frac_part.size());
  Rational v = exp10 >= 0 ? Rational(mant * pow10(exp10)) : Rational(mant, pow10(-exp10));
  return neg ? Rational(-v) : v;
}

ExactTensor read_tensor(std::istream& in) {
  int lineno = 0;
  Header h = read_header(in, lineno);
  if (h.kind != "tensor") throw ParseError("expected a tensor header", lineno);
  return read_tensor_body(in, h, lineno);
}

ExactPolynomial read_polynomial(std::istream& in) {
  int lineno = 0;
  Header h = read_header(in, lineno);
  if (h.kind != "poly") throw ParseError("expected a poly header", lineno);
  return read_polynomial_body(in, h, lineno);
}

ExactTensor read_tensor_or_polynomial(std::istream& in) {
  int lineno = 0;
  Header h = read_header(in, lineno);
  if (h.kind == "tensor") return read_tensor_body(in, h, lineno);
  if (h.m < 1) throw ParseError("polynomial degree must be positive to define a tensor", lineno);
  return from_polynomial(read_polynomial_body(in, h, lineno));
}

ExactTensor parse_tensor(const std::string& text) {
  std::istringstream in(text);
  return read_tensor_or_polynomial(in);
}

ExactTensor load_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_tensor_or_polynomial(in);
}

std::string format_rational(const Rational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return numerator(v).str() + "/" + denominator(v).str();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

template <class T, class Fmt>
std::string write_tensor_impl(const BasicSymmetricTensor<T>& a, Fmt fmt) {
  std::ostringstream out;
  out << "tensor " << a.order() << ' ' << a.dim() << '\n';
  for (const auto& [idx, v] : a.entries()) {
    for (int i : idx) out << (i + 1) << ' ';
    out << fmt(v) << '\n';
  }
  return out.str();
}

template <class T, class Fmt>
std::string write_polynomial_impl(const BasicPolynomial<T>& f, Fmt fmt) {
  std::ostringstream out;
  out << "poly " << f.degree() << ' ' << f.dim() << '\n';
  // descending graded-lex so x1^m comes first
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    out << fmt(it->second);
    for (int e : it->first) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string write_tensor(const ExactTensor& a) { return write_tensor_impl(a, format_rational); }
std::string write_tensor(const SymmetricTensor& a) { return write_tensor_impl(a, format_double); }
std::string write_polynomial(const ExactPolynomial& f) { return write_polynomial_impl(f, format_rational); }
std::string write_polynomial(const Polynomial& f) { return write_polynomial_impl(f, format_double); }

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  int e = 0;
  double mant = std::frexp(v, &e);
  // mant * 2^53 is an integer for any double
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  e -= 53;
  Rational r(scaled);
  cpp_int two_pow = 1;
  two_pow <<= std::abs(e);
  return e >= 0 ? Rational(r * Rational(two_pow)) : Rational(r / Rational(two_pow));
}

ExactTensor to_exact(const SymmetricTensor& a) {
  ExactTensor out(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries()) out.set(idx, to_rational(v));
  return out;
}

}  // namespace sostensor
