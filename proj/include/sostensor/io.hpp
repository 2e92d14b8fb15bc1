#pragma once

// Text formats.
//
//   tensor <m> <n>
//   i1 i2 ... im value        (1-based, any permutation of the index)
//
//   poly <m> <n>
//   coeff a1 a2 ... an        (exponents)
//
// Values are integers, decimals (1.5, 2e-3) or fractions (p/q); all are read
// exactly. '#' starts a comment. A repeated canonical index or exponent is an
// error.

#include <iosfwd>
#include <string>
#include <string_view>

#include "sostensor/errors.hpp"
#include "sostensor/tensor.hpp"

namespace sostensor {

// Throws ParseError.
Rational parse_rational(std::string_view text);

ExactTensor read_tensor(std::istream& in);
ExactPolynomial read_polynomial(std::istream& in);
// Accepts either header; a polynomial is converted to its tensor.
ExactTensor read_tensor_or_polynomial(std::istream& in);

ExactTensor parse_tensor(const std::string& text);
ExactTensor load_tensor_file(const std::string& path);

std::string format_rational(const Rational& v);
// Shortest representation that reads back to the same double.
std::string format_double(double v);

std::string write_tensor(const ExactTensor& a);
std::string write_tensor(const SymmetricTensor& a);
std::string write_polynomial(const ExactPolynomial& f);
std::string write_polynomial(const Polynomial& f);

// Exact value of a finite double.
Rational to_rational(double v);
ExactTensor to_exact(const SymmetricTensor& a);

}  // namespace sostensor
