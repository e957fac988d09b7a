#include "flatblock/exactnum.h"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

namespace flatblock {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonParallelGluing: return "NonParallelGluing";
    case ErrorCode::NonConvexFace: return "NonConvexFace";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BadGluing: return "BadGluing";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::DisconnectedCover: return "DisconnectedCover";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::FieldInsufficient: return "FieldInsufficient";
    case ErrorCode::BadPolygon: return "BadPolygon";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::SectorRequired: return "SectorRequired";
    case ErrorCode::BudgetTooLargeGuard: return "BudgetTooLargeGuard";
    case ErrorCode::NoSingularities: return "NoSingularities";
    case ErrorCode::ContainsEndpoint: return "ContainsEndpoint";
    case ErrorCode::NoCoverData: return "NoCoverData";
    case ErrorCode::DegenerateRank: return "DegenerateRank";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  std::string text = strip_spaces(raw);
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorCode::ParseError, "not an exact rational: '" + std::string(raw) + "'");
  BigInt n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(raw) + "'");
  Rational q(n, d);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_square_free(long d) {
  if (d < 1) return false;
  for (long p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

Scalar::Scalar(const Rational& a, const Rational& b, long d) : a_(a), b_(b), d_(d) {
  if (!is_square_free(d)) throw Error(ErrorCode::FieldMismatch, "field discriminant must be square-free, got " + std::to_string(d));
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
}

Scalar Scalar::sqrt_of(long d) { return d == 1 ? Scalar(1) : Scalar(Rational(0), Rational(1), d); }

Scalar Scalar::ratio(long num, long den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "ratio with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return Scalar(q);
}

long merge_fields(const Scalar& l, const Scalar& r) {
  if (l.d_ == r.d_) return l.d_;
  if (l.d_ == 1) return r.d_;
  if (r.d_ == 1) return l.d_;
  // A value with zero sqrt part is rational and fits either field.
  if (l.is_rational()) return r.d_;
  if (r.is_rational()) return l.d_;
  throw Error(ErrorCode::FieldMismatch,
              "Q(sqrt " + std::to_string(l.d_) + ") and Q(sqrt " + std::to_string(r.d_) + ")");
}

int Scalar::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 d.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * d_;
  int c = cmp(lhs, rhs);
  if (c > 0) return sa;
  if (c < 0) return sb;
  return 0;
}

Scalar Scalar::operator-() const {
  Scalar r(*this);
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  d_ = merge_fields(*this, o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  d_ = merge_fields(*this, o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  long d = merge_fields(*this, o);
  if (sgn(b_) == 0 && sgn(o.b_) == 0) {
    a_ *= o.a_;
  } else {
    Rational na = a_ * o.a_ + b_ * o.b_ * d;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
  }
  d_ = d;
  return *this;
}

Scalar Scalar::conjugate() const {
  Scalar r(*this);
  r.b_ = -r.b_;
  return r;
}

Rational Scalar::norm() const { return a_ * a_ - b_ * b_ * d_; }

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (sgn(b_) == 0) {
    Scalar r(*this);
    r.a_ = 1 / a_;
    return r;
  }
  Rational n = norm();
  Scalar r(*this);
  r.a_ = a_ / n;
  r.b_ = -b_ / n;
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (sgn(o.b_) == 0) {
    d_ = merge_fields(*this, o);
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const Scalar& l, const Scalar& r) {
  if (l.a_ != r.a_ || l.b_ != r.b_) return false;
  if (sgn(l.b_) != 0 && l.d_ != r.d_) merge_fields(l, r);
  return true;
}

std::strong_ordering operator<=>(const Scalar& l, const Scalar& r) {
  if (sgn(l.b_) == 0 && sgn(r.b_) == 0) {
    int c = cmp(l.a_, r.a_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  int s = (l - r).sign();
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

double Scalar::to_double() const {
  double v = a_.get_d();
  if (sgn(b_) != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
  return v;
}

BigInt Scalar::floor() const {
  double approx = to_double();
  BigInt n;
  if (std::isfinite(approx) && std::fabs(approx) < 1e15) {
    n = static_cast<long>(std::floor(approx));
  } else {
    mpz_fdiv_q(n.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
  }
  // Exact correction of the floating estimate.
  while (*this < Scalar(Rational(n))) n -= 1;
  while (!(*this < Scalar(Rational(n + 1)))) n += 1;
  return n;
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  BigInt n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  return Rational(n, d);
}

}  // namespace

std::optional<Scalar> Scalar::exact_sqrt() const {
  if (sign() < 0) return std::nullopt;
  if (is_zero()) return Scalar(0);
  if (sgn(b_) == 0) {
    if (auto r = rational_sqrt(a_)) return Scalar(*r, 0, d_);
    // sqrt(a) = c*sqrt(d) with c = sqrt(a/d).
    if (d_ > 1)
      if (auto c = rational_sqrt(a_ / d_)) return Scalar(0, *c, d_);
    return std::nullopt;
  }
  // (x + y sqrt d)^2 = a + b sqrt d: x^2 + d y^2 = a, 2xy = b.
  auto disc = rational_sqrt(norm());
  if (!disc) return std::nullopt;
  for (const Rational& x2 : {Rational((a_ + *disc) / 2), Rational((a_ - *disc) / 2)}) {
    auto x = rational_sqrt(x2);
    if (!x || sgn(*x) == 0) continue;
    Rational y = b_ / (2 * *x);
    Scalar cand(*x, y, d_);
    if (cand.sign() < 0) cand = -cand;
    if (cand * cand == *this) return cand;
  }
  return std::nullopt;
}

std::string Scalar::str() const {
  bool has_a = sgn(a_) != 0;
  bool has_b = sgn(b_) != 0;
  if (!has_b) return format_rational(a_);
  std::string out;
  if (has_a) out = format_rational(a_);
  Rational mag = abs(b_);
  std::string coef = mag == 1 ? "" : format_rational(mag) + "*";
  if (sgn(b_) < 0)
    out += "-";
  else if (has_a)
    out += "+";
  out += coef + "sqrt(" + std::to_string(d_) + ")";
  return out;
}

Scalar Scalar::parse(std::string_view raw) {
  std::string text = strip_spaces(raw);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  if (text.find_first_of(".eE") != std::string::npos && text.find("sqrt") == std::string::npos)
    throw Error(ErrorCode::ParseError, "floating-point values are not accepted: '" + text + "'");
  Rational a(0), b(0);
  long d = 1;
  size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
      negative = text[pos] == '-';
      ++pos;
    } else if (!first) {
      throw Error(ErrorCode::ParseError, "expected '+' or '-' in '" + text + "'");
    }
    first = false;
    size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    std::string term = text.substr(pos, end - pos);
    pos = end;
    auto sq = term.find("sqrt(");
    if (sq == std::string::npos) {
      Rational q = parse_rational(term);
      a += negative ? Rational(-q) : q;
      continue;
    }
    if (term.back() != ')') throw Error(ErrorCode::ParseError, "bad sqrt term '" + term + "'");
    std::string radicand = term.substr(sq + 5, term.size() - sq - 6);
    if (!all_digits(radicand)) throw Error(ErrorCode::ParseError, "bad radicand in '" + term + "'");
    long rd = std::stol(radicand);
    if (!is_square_free(rd) || rd == 1)
      throw Error(ErrorCode::ParseError, "radicand must be square-free and > 1 in '" + term + "'");
    if (d != 1 && d != rd) throw Error(ErrorCode::FieldMismatch, "mixed radicands in '" + text + "'");
    d = rd;
    Rational coef(1);
    if (sq > 0) {
      if (term[sq - 1] != '*') throw Error(ErrorCode::ParseError, "expected '*' before sqrt in '" + term + "'");
      coef = parse_rational(term.substr(0, sq - 1));
    }
    b += negative ? Rational(-coef) : coef;
  }
  Scalar s;
  s.a_ = a;
  s.b_ = b;
  s.d_ = d;
  s.a_.canonicalize();
  s.b_.canonicalize();
  return s;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

bool same_direction(const Vec2& u, const Vec2& v) {
  if (u.is_zero() || v.is_zero()) return false;
  return cross(u, v).is_zero() && dot(u, v).sign() > 0;
}

std::string Vec2::str() const { return "(" + x.str() + "," + y.str() + ")"; }

std::ostream& operator<<(std::ostream& os, const Vec2& v) { return os << v.str(); }

namespace {

// Splits "a,b" at the single top-level comma (sqrt(...) has none).
std::pair<std::string, std::string> split_pair(const std::string& inner, std::string_view what) {
  auto comma = inner.find(',');
  if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos)
    throw Error(ErrorCode::ParseError, "expected two components in " + std::string(what));
  return {inner.substr(0, comma), inner.substr(comma + 1)};
}

}  // namespace

Vec2 parse_vec2(std::string_view raw) {
  std::string text = strip_spaces(raw);
  if (text.size() < 5 || text.front() != '(' || text.back() != ')')
    throw Error(ErrorCode::ParseError, "expected (x,y), got '" + text + "'");
  auto [x, y] = split_pair(text.substr(1, text.size() - 2), text);
  return {Scalar::parse(x), Scalar::parse(y)};
}

std::string Mat2::str() const {
  return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]";
}

Mat2 parse_mat2(std::string_view raw) {
  std::string text = strip_spaces(raw);
  if (text.size() < 9 || text.substr(0, 2) != "[[" || text.substr(text.size() - 2) != "]]")
    throw Error(ErrorCode::ParseError, "expected [[a,b],[c,d]], got '" + text + "'");
  std::string inner = text.substr(2, text.size() - 4);
  auto mid = inner.find("],[");
  if (mid == std::string::npos) throw Error(ErrorCode::ParseError, "expected [[a,b],[c,d]], got '" + text + "'");
  auto [a, b] = split_pair(inner.substr(0, mid), text);
  auto [c, d] = split_pair(inner.substr(mid + 3), text);
  return {Scalar::parse(a), Scalar::parse(b), Scalar::parse(c), Scalar::parse(d)};
}

}  // namespace flatblock
