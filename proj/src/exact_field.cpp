#include "octfake/exact_field.hpp"

#include <cfloat>
#include <cmath>
#include <ostream>
#include <utility>

namespace octfake {

namespace {

// Enough bits that a single non-cancelling sum rounds well within 2 ulp.
constexpr mp_bitcnt_t kApproxBits = 192;

mpf_class to_mpf(const Rational& r) {
  mpf_class out(0, kApproxBits);
  out = r;
  return out;
}

// High-precision approximation of a + b*sqrt(2). Cancellation between the two
// terms is avoided by switching to norm / (a - b*sqrt(2)).
mpf_class approximate(const QSqrt2& x) {
  mpf_class root2(2, kApproxBits);
  root2 = sqrt(root2);
  const int sa = sgn(x.a());
  const int sb = sgn(x.b());
  if (sa == 0 || sb == 0 || sa == sb) {
    mpf_class out(0, kApproxBits);
    out = to_mpf(x.a()) + to_mpf(x.b()) * root2;
    return out;
  }
  mpf_class denom(0, kApproxBits);
  denom = to_mpf(x.a()) - to_mpf(x.b()) * root2;
  mpf_class out(0, kApproxBits);
  out = to_mpf(x.norm()) / denom;
  return out;
}

Integer floor_of(const mpf_class& v) {
  mpf_class f(0, kApproxBits);
  f = floor(v);
  return Integer(f);
}

}  // namespace

QSqrt2::QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  a_.canonicalize();
  b_.canonicalize();
}

int QSqrt2::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with 2 b^2.
  const int c = cmp(a_ * a_, 2 * b_ * b_);
  return sa > 0 ? c : -c;
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& rhs) {
  a_ += rhs.a_;
  b_ += rhs.b_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& rhs) {
  a_ -= rhs.a_;
  b_ -= rhs.b_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& rhs) {
  Rational a = a_ * rhs.a_ + 2 * b_ * rhs.b_;
  Rational b = a_ * rhs.b_ + b_ * rhs.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& rhs) {
  if (rhs.is_zero()) throw DivisionByZero("division by zero in Q(sqrt2)");
  const Rational n = rhs.norm();
  *this *= rhs.conjugate();
  a_ /= n;
  b_ /= n;
  return *this;
}

std::strong_ordering operator<=>(const QSqrt2& lhs, const QSqrt2& rhs) {
  const int s = (lhs - rhs).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double QSqrt2::to_double() const {
  if (is_zero()) return 0.0;
  const mpf_class v = approximate(*this);
  mpf_class mag(0, kApproxBits);
  mpf_abs(mag.get_mpf_t(), v.get_mpf_t());
  if (mag > mpf_class(DBL_MAX, kApproxBits)) {
    throw FloatOverflow("value " + to_string() + " exceeds double range");
  }
  return v.get_d();
}

std::string rational_to_string(const Rational& r) {
  return r.get_str(10);
}

std::string QSqrt2::to_string() const {
  if (sgn(b_) == 0) return rational_to_string(a_);
  std::string root;
  if (b_ == 1) {
    root = "√2";
  } else if (b_ == -1) {
    root = "-√2";
  } else {
    root = rational_to_string(b_) + "√2";
  }
  if (sgn(a_) == 0) return root;
  std::string out = rational_to_string(a_);
  if (root.front() != '-') out += '+';
  return out + root;
}

QSqrt2 QSqrt2::parse(const std::string& text) {
  std::string s = text;
  // Normalize the alternate spelling.
  for (std::string::size_type p; (p = s.find("sqrt2")) != std::string::npos;) {
    s.replace(p, 5, "√2");
  }
  const std::string root = "√2";
  const auto root_pos = s.find(root);
  if (root_pos == std::string::npos) return QSqrt2(parse_rational(s));
  if (root_pos + root.size() != s.size()) {
    throw ParseError("malformed Q(sqrt2) literal '" + text + "'");
  }
  // Split "a+b" / "a-b" at the last sign that is not the leading one.
  const std::string body = s.substr(0, root_pos);
  std::string::size_type split = std::string::npos;
  for (std::string::size_type i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  }
  std::string a_text = split == std::string::npos ? "" : body.substr(0, split);
  std::string b_text = split == std::string::npos ? body : body.substr(split);
  if (!b_text.empty() && b_text.front() == '+') b_text.erase(0, 1);
  Rational b;
  if (b_text.empty()) {
    b = 1;
  } else if (b_text == "-") {
    b = -1;
  } else {
    b = parse_rational(b_text);
  }
  Rational a = a_text.empty() ? Rational(0) : parse_rational(a_text);
  return QSqrt2(std::move(a), std::move(b));
}

std::ostream& operator<<(std::ostream& os, const QSqrt2& x) {
  return os << x.to_string();
}

QSqrt2 qs_arith(ArithOp op, const QSqrt2& x, const QSqrt2& y) {
  switch (op) {
    case ArithOp::Add:
      return x + y;
    case ArithOp::Sub:
      return x - y;
    case ArithOp::Mul:
      return x * y;
    case ArithOp::Div:
      return x / y;
    case ArithOp::Neg:
      return -x;
  }
  throw std::invalid_argument("unknown arithmetic op");
}

int qs_sign(const QSqrt2& x) { return x.sign(); }

Integer qs_floor_div(const QSqrt2& x, const QSqrt2& m) {
  if (m.sign() <= 0) throw NonPositiveModulus("modulus must be positive, got " + m.to_string());
  // Seed from an approximation, then certify with exact signs:
  // find lo with x - lo*m >= 0 and hi with x - hi*m < 0, and bisect.
  const Integer seed = floor_of(approximate(x / m));
  auto fits = [&](const Integer& k) { return (x - QSqrt2(Rational(k)) * m).sign() >= 0; };
  Integer lo = seed;
  Integer hi = seed + 1;
  Integer step = 1;
  while (!fits(lo)) {
    hi = lo;
    lo -= step;
    step *= 2;
  }
  step = 1;
  while (fits(hi)) {
    lo = hi;
    hi += step;
    step *= 2;
  }
  while (hi - lo > 1) {
    Integer mid = lo + (hi - lo) / 2;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

QSqrt2 qs_mod(const QSqrt2& x, const QSqrt2& m) {
  const Integer k = qs_floor_div(x, m);
  return x - QSqrt2(Rational(k)) * m;
}

double qs_to_float(const QSqrt2& x) { return x.to_double(); }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational");
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw ParseError("malformed rational '" + text + "'");
    std::string::size_type i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw ParseError("malformed rational '" + text + "'");
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw ParseError("malformed rational '" + text + "'");
    }
    return Integer(part[0] == '+' ? part.substr(1) : part, 10);
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  const Integer num = parse_int(text.substr(0, slash));
  const Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in rational '" + text + "'");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

namespace {

nlohmann::json rational_pair(const Rational& r) {
  return nlohmann::json::array({r.get_num().get_str(10), r.get_den().get_str(10)});
}

Rational rational_from_pair(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw ParseError("rational must be a pair of decimal strings, got " + j.dump());
  }
  return parse_rational(j[0].get<std::string>() + "/" + j[1].get<std::string>());
}

}  // namespace

void to_json(nlohmann::json& j, const QSqrt2& x) {
  j = nlohmann::json::object();
  j["a"] = rational_pair(x.a());
  j["b"] = rational_pair(x.b());
}

void from_json(const nlohmann::json& j, QSqrt2& x) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b")) {
    throw ParseError("Q(sqrt2) value must be an object with keys a, b: " + j.dump());
  }
  x = QSqrt2(rational_from_pair(j.at("a")), rational_from_pair(j.at("b")));
}

}  // namespace octfake
