#include "sfs/field.hpp"

#include <stdexcept>

namespace sfs {

namespace {

Fp mpz_to_field(const mpz_class& z) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return Fp(mpz_fdiv_ui(z.get_mpz_t(), Fp::kModulus));
}

}  // namespace

Fp to_field(const Rational& r) {
  const Fp den = mpz_to_field(r.get_den());
  if (den.is_zero()) throw std::domain_error("to_field: denominator divisible by field modulus");
  return mpz_to_field(r.get_num()) / den;
}

std::string rational_to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational \"" + s + "\" (expected \"num/den\")");
  mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in \"" + s + "\"");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace sfs
