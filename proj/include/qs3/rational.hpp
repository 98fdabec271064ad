#ifndef QS3_RATIONAL_HPP
#define QS3_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qs3 {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Renders "p" or "p/q"; q is always positive in cpp_rational.
std::string rational_to_string(const Rational& r);

// Parses an integer or "p/q" literal. Returns false on malformed input.
bool parse_rational(const std::string& text, Rational& out);

}  // namespace qs3

#endif
