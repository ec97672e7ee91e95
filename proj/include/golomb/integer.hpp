#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "golomb/errors.hpp"

namespace golomb {

// Arbitrary-precision signed integer. Everything numeric in the library runs
// on this type; narrow views (uint64_t residues, table indices) are produced
// through checked conversions only.
using Integer = boost::multiprecision::cpp_int;

using boost::multiprecision::gcd;
using boost::multiprecision::lcm;
using boost::multiprecision::powm;

inline Integer ipow(const Integer& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline uint64_t to_u64(const Integer& x, const char* what) {
  if (x < 0 || x > std::numeric_limits<uint64_t>::max()) {
    throw resource_error(std::string(what) + ": value " + x.str() +
                         " does not fit in 64 bits");
  }
  return static_cast<uint64_t>(x);
}

inline unsigned to_unsigned(const Integer& x, const char* what) {
  if (x < 0 || x > std::numeric_limits<unsigned>::max()) {
    throw resource_error(std::string(what) + ": value " + x.str() +
                         " is out of range");
  }
  return static_cast<unsigned>(x);
}

// Strict decimal parser for CLI flags: optional sign, digits, nothing else.
inline Integer parse_integer(const std::string& text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  if (i == text.size()) throw domain_error("not a decimal integer: '" + text + "'");
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw domain_error("not a decimal integer: '" + text + "'");
    }
  }
  return Integer(text);
}

// JSON encoding of an Integer: a plain number while it fits in the exact
// integer types nlohmann::json carries, a decimal string beyond that.
inline nlohmann::json json_int(const Integer& x) {
  if (x >= 0 && x <= std::numeric_limits<uint64_t>::max()) {
    return static_cast<uint64_t>(x);
  }
  if (x < 0 && x >= std::numeric_limits<int64_t>::min()) {
    return static_cast<int64_t>(x);
  }
  return x.str();
}

inline Integer integer_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number_unsigned()) return Integer(j.get<uint64_t>());
  if (j.is_number_integer()) return Integer(j.get<int64_t>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw domain_error(std::string(what) + ": expected an integer");
}

// Extended Euclid, giving the inverse of a modulo m. m >= 1; gcd(a, m) must
// be 1 (checked), which makes the m == 1 case the inverse 0.
inline Integer mod_inverse(const Integer& a, const Integer& m) {
  if (m < 1) throw domain_error("mod_inverse: modulus must be >= 1");
  if (m == 1) return 0;
  Integer old_r = ((a % m) + m) % m, r = m;
  Integer old_s = 1, s = 0;
  while (r != 0) {
    const Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw domain_error("mod_inverse: arguments are not coprime");
  return ((old_s % m) + m) % m;
}

}  // namespace golomb
