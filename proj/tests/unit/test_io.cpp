#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sostensor/errors.hpp"
#include "sostensor/generators.hpp"
#include "sostensor/io.hpp"
#include "sostensor/structured.hpp"
#include "support.hpp"

using namespace sostensor;
using namespace sostensor::testing;

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("3"), 3);
  EXPECT_EQ(parse_rational("-1/6"), Rational(-1, 6));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("2e-3"), Rational(1, 500));
  EXPECT_EQ(parse_rational("1.5E+2"), 150);
  EXPECT_EQ(parse_rational("0.0809"), Rational(809, 10000));
  EXPECT_EQ(parse_rational("010"), 10);
  EXPECT_EQ(parse_rational("7/08"), Rational(7, 8));
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational("1.2.3"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(ReadTensor, OneBasedAnyPermutation) {
  auto a = parse_tensor("# comment\ntensor 4 2\n2 1 1 2 1/3\n1 1 1 1 2\n");
  EXPECT_EQ(a.order(), 4);
  EXPECT_EQ(a.dim(), 2);
  EXPECT_EQ(a.get({0, 0, 1, 1}), Rational(1, 3));
  EXPECT_EQ(a.get({0, 0, 0, 0}), 2);
}

TEST(ReadTensor, PolynomialHeaderConverts) {
  auto a = parse_tensor("poly 4 4\n4 1 1 1 1\n");
  EXPECT_EQ(a.get({0, 1, 2, 3}), Rational(1, 6));
}

TEST(ReadTensor, ErrorsCarryLineNumbers) {
  try {
    parse_tensor("tensor 4 2\n1 1 1 1 1\n1 1 1 3 1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_tensor("tensor 4 2\n1 1 2 2 1\n2 1 2 1 5\n"), ParseError);  // repeated canonical index
  EXPECT_THROW(parse_tensor("tensor 4 2\n1 1 1 1\n"), ParseError);
  EXPECT_THROW(parse_tensor("matrix 2 2\n"), ParseError);
  EXPECT_THROW(parse_tensor("poly 4 2\n1 3 0\n"), ParseError);  // wrong degree
  EXPECT_THROW(load_tensor_file("/nonexistent/file.txt"), ParseError);
}

TEST(WriteTensor, ExactRoundTrip) {
  for (const ExactTensor& a : {example51(), example53(10), example54(8), cauchy_tensor_exact({1, 2, 3}, 4)}) {
    std::string text = write_tensor(a);
    auto b = parse_tensor(text);
    EXPECT_EQ(b, a);
    EXPECT_EQ(write_tensor(b), text);
  }
}

TEST(WriteTensor, DoubleRoundTrip) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_tensor(4, 3, rng);
    a.set({0, 1, 1, 2}, 0.0809);
    a.set({0, 0, 1, 2}, -3.0517578125e-05);
    auto b = parse_tensor(write_tensor(a)).cast<double>();
    EXPECT_EQ(b, a);
  }
}

TEST(WritePolynomial, RoundTrip) {
  auto f = exact_poly(4, 3, "1 4 0 0\n-3/7 2 1 1\n0.5 0 0 4\n");
  std::istringstream in(write_polynomial(f));
  EXPECT_EQ(read_polynomial(in), f);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 1e22, 0.0})
    EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(ToRational, Exact) {
  EXPECT_EQ(to_rational(0.5), Rational(1, 2));
  EXPECT_EQ(to_rational(0.1).convert_to<double>(), 0.1);
  EXPECT_EQ(to_rational(-3.0), -3);
}

TEST(Rng, PortableSequence) {
  Rng r(1);
  EXPECT_EQ(r.next(), 2469588189546311528ull);  // mt19937_64, seed 1
  Rng q(42);
  EXPECT_EQ(q.uniform_int(1, 1000), 407);
  EXPECT_EQ(q.uniform_int(1, 1000), 825);
  EXPECT_EQ(q.uniform_int(1, 1000), 451);
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    double u = a.uniform01();
    EXPECT_EQ(u, b.uniform01());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Generators, Example51Entries) {
  auto a = example51();
  EXPECT_EQ(a.get({0, 0, 0, 1, 1, 1}), Rational(1, 5));
  EXPECT_EQ(a.get({1, 0, 1, 0, 1, 0}), Rational(1, 5));
  EXPECT_EQ(a.get({2, 2, 3, 3, 3, 3}), Rational(2, 5));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(a.diagonal(i), 1);
  EXPECT_EQ(a.nnz(), 6u);
}

TEST(Generators, Example53Entries) {
  auto a = example53(10);
  Rational alpha(1, 126), beta(-1, 45);
  EXPECT_EQ(a.get({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}), alpha);
  EXPECT_EQ(a.get({2, 2, 3, 3, 3, 3, 3, 3, 3, 3}), beta);
  EXPECT_EQ(a.get({2, 2, 2, 2, 2, 2, 2, 2, 3, 3}), beta);
  // f = x1^10 + ... + x4^10 + 2 x1^5 x2^5 - x3^2 x4^8 - x3^8 x4^2
  auto f = to_polynomial(a);
  EXPECT_EQ(f.coefficient({5, 5, 0, 0}), 2);
  EXPECT_EQ(f.coefficient({0, 0, 2, 8}), -1);
  EXPECT_EQ(f.coefficient({0, 0, 8, 2}), -1);
  EXPECT_THROW(example53(15), std::invalid_argument);
}

TEST(Generators, Example54Entries) {
  auto a = example54(8);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(a.diagonal(i), 8);
  EXPECT_EQ(a.get({0, 1, 2, 3}), Rational(1, 6));
  EXPECT_EQ(a.get({4, 5, 6, 7}), Rational(1, 6));
  EXPECT_EQ(a.get({0, 1, 2, 4}), 0);
  EXPECT_THROW(example54(6), std::invalid_argument);
}

TEST(Generators, Example52Entries) {
  auto a = example52(Rational(1, 2), Rational(-1));
  EXPECT_EQ(a.get({0, 0, 0, 1, 1, 1}), Rational(1, 2));
  EXPECT_EQ(a.get({2, 2, 2, 3, 3, 3}), -1);
  EXPECT_EQ(to_polynomial(a).coefficient({3, 3, 0, 0}), 10);
  EXPECT_DOUBLE_EQ(example52_lambda(0.5, -1.0), -9.0);
}

TEST(Generators, Procedure1Structure) {
  Rng a(7), b(7);
  auto p = procedure1(4, 8, 2, 4, 100, a);
  auto q = procedure1(4, 8, 2, 4, 100, b);
  EXPECT_EQ(p.tensor, q.tensor);
  EXPECT_EQ(p.l, q.l);
  EXPECT_EQ(p.positive_definite, p.l % 2 == 0);
  EXPECT_EQ(write_tensor(p.tensor), write_tensor(q.tensor));
  for (int i = 0; i < 8; ++i) EXPECT_EQ(std::abs(p.tensor.diagonal(i)), 100.0);
  EXPECT_TRUE(detect_extended_z(p.tensor).holds);
  ASSERT_EQ(p.partition.size(), 2u);
  EXPECT_THROW(procedure1(4, 9, 2, 4, 100, a), std::invalid_argument);
  EXPECT_THROW(procedure1(3, 8, 2, 4, 100, a), std::invalid_argument);
}

TEST(Generators, ParityIsBalanced) {
  Rng rng(99);
  int even = 0;
  for (int k = 0; k < 400; ++k) even += procedure1(4, 4, 2, 2, 10, rng).positive_definite;
  EXPECT_GT(even, 160);
  EXPECT_LT(even, 240);
}

TEST(Generators, ClassNamesRoundTrip) {
  for (auto c : all_structured_classes()) EXPECT_EQ(parse_structured_class(to_string(c)), c);
  EXPECT_THROW(parse_structured_class("no_such_class"), std::invalid_argument);
  EXPECT_EQ(all_structured_classes().size(), 9u);
}
