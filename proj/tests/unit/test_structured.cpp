#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sostensor/errors.hpp"
#include "sostensor/generators.hpp"
#include "sostensor/spectral.hpp"
#include "sostensor/structured.hpp"
#include "support.hpp"

using namespace sostensor;
using namespace sostensor::testing;

namespace {

// 2 I + off-diagonal -0.01 on every mixed index (n = 2, m = 4).
SymmetricTensor small_negative_off(int m, int n) {
  SymmetricTensor a(m, n);
  for_each_canonical_index(m, n, [&](const MultiIndex& idx) { a.set(idx, is_diagonal_index(idx) ? 2.0 : -0.01); });
  return a;
}

SymmetricTensor relabel(const SymmetricTensor& a, const std::vector<int>& perm) {
  SymmetricTensor out(a.order(), a.dim());
  for (const auto& [idx, v] : a.entries()) {
    MultiIndex p = idx;
    for (auto& i : p) i = perm[i];
    out.set(p, v);
  }
  return out;
}

}  // namespace

TEST(DeltaIndexSet, Cases) {
  EXPECT_TRUE(delta_index_set(tensor_of(4, 2, "1 4 0\n2 2 2\n")).empty());
  EXPECT_EQ(delta_index_set(tensor_of(4, 2, "1 4 0\n-2 2 2\n")), (std::vector<Exponent>{{2, 2}}));
  EXPECT_EQ(delta_index_set(tensor_of(4, 2, "1 4 0\n2 3 1\n")), (std::vector<Exponent>{{3, 1}}));
  EXPECT_THROW(delta_index_set(SymmetricTensor(3, 2)), OddOrderError);
}

TEST(DiagonalDominance, Cases) {
  auto id = is_diagonally_dominated(identity_tensor<double>(4, 3));
  EXPECT_TRUE(id.strict);
  EXPECT_TRUE(id.weak);

  // row off-sum: 6 permutations of (i, j, k, l) with entry 1/6
  auto e54 = is_diagonally_dominated(example54(4).cast<double>());
  EXPECT_TRUE(e54.strict);
  EXPECT_TRUE(e54.weak);
  RowSums rs = row_sums(example54(4).cast<double>());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(rs.off_abs[i], 6 * (1.0 / 6), 1e-15);

  auto f = is_diagonally_dominated(tensor_of(4, 2, "1 4 0\n1 0 4\n6 2 2\n"));
  EXPECT_FALSE(f.strict);
  EXPECT_TRUE(f.weak);
  EXPECT_EQ(f.strict_violating_row, 0);
}

TEST(DiagonalDominance, BoundaryFlag) {
  // x1^4 + x2^4 - 2 x1^2 x2^2: row off-sum 3 * (1/3) = 1 equals the diagonal
  auto d = is_diagonally_dominated(tensor_of(4, 2, "1 4 0\n1 0 4\n-2 2 2\n"));
  EXPECT_TRUE(d.strict);
  EXPECT_TRUE(d.strict_boundary);
}

TEST(B0, Cases) {
  EXPECT_TRUE(is_b0(all_one_tensor<double>(4, 3)).holds);
  EXPECT_TRUE(is_b0(identity_tensor<double>(4, 3)).holds);
  SymmetricTensor neg(4, 3);
  neg.set({0, 0, 0, 0}, -1.0);
  auto r = is_b0(neg);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.violating_row, 0);
}

TEST(B0Split, AllOne) {
  auto s = b0_split(all_one_tensor<Rational>(4, 3));
  EXPECT_EQ(s.m.nnz(), 0u);
  ASSERT_EQ(s.terms.size(), 1u);
  EXPECT_EQ(s.terms[0].first, 1);
  EXPECT_EQ(s.terms[0].second, (std::vector<int>{0, 1, 2}));
}

TEST(B0Split, DominatedZTensorIsItself) {
  auto a = to_exact(small_negative_off(4, 3));
  auto s = b0_split(a);
  EXPECT_EQ(s.m, a);
  EXPECT_TRUE(s.terms.empty());
}

TEST(B0Split, IdentityPlusAllOne) {
  ExactTensor a = identity_tensor<Rational>(4, 2);
  a += all_one_tensor<Rational>(4, 2);
  auto s = b0_split(a);
  EXPECT_EQ(s.m, identity_tensor<Rational>(4, 2));
  ASSERT_EQ(s.terms.size(), 1u);
  EXPECT_EQ(s.terms[0].first, 1);
  EXPECT_EQ(s.terms[0].second, (std::vector<int>{0, 1}));
}

TEST(B0Split, RejectsNonB0) {
  EXPECT_THROW(b0_split(tensor_of(4, 2, "1 4 0\n1 0 4\n12 2 2\n")), std::invalid_argument);
}

TEST(DoubleB, Quantities) {
  auto q = double_b_quantities(identity_tensor<double>(4, 3));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(q.beta[i], 0.0);
    EXPECT_EQ(q.delta[i], 0.0);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(q.delta_ij[i][j], 0.0);
  }
  auto e = double_b_quantities(all_one_tensor<double>(4, 2));
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(e.beta[i], 1.0);
    EXPECT_EQ(e.delta[i], 0.0);
  }
  // Z-tensor: beta = 0, Delta_i = sum of |off-diagonal| over row i
  auto z = small_negative_off(4, 2);
  auto zq = double_b_quantities(z);
  RowSums rs = row_sums(z);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(zq.beta[i], 0.0);
    EXPECT_NEAR(zq.delta[i], rs.off_abs[i], 1e-15);
    EXPECT_NEAR(rs.off_abs[i], 7 * 0.01, 1e-15);
  }
}

TEST(DoubleB, Classification) {
  auto r = classify_b_family(small_negative_off(4, 2));
  EXPECT_TRUE(r.double_b.holds);
  EXPECT_TRUE(r.quasi_double_b0.holds);
  EXPECT_TRUE(r.mb0.holds);
  auto e = classify_b_family(all_one_tensor<double>(4, 3));
  EXPECT_FALSE(e.double_b.holds);
  EXPECT_FALSE(e.double_b.witness.empty());
}

TEST(SpectralRadius, Cases) {
  EXPECT_NEAR(spectral_radius_nonnegative(all_one_tensor<double>(4, 3)).rho, 27.0, 1e-9);
  EXPECT_NEAR(spectral_radius_nonnegative(identity_tensor<double>(4, 3)).rho, 1.0, 1e-12);
  SymmetricTensor d(4, 2);
  d.set({0, 0, 0, 0}, 2.0);
  d.set({1, 1, 1, 1}, 5.0);
  EXPECT_NEAR(spectral_radius_nonnegative(d).rho, 5.0, 1e-12);
  EXPECT_THROW(spectral_radius_nonnegative(identity_tensor<double>(4, 2) * -1.0), std::invalid_argument);
}

TEST(SpectralRadius, DiagonalTensorGivesMaxDiagonal) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    SymmetricTensor d(4, 4);
    double best = 0.0;
    for (int i = 0; i < 4; ++i) {
      double v = rng.uniform(0.0, 10.0);
      d.set(MultiIndex(4, i), v);
      best = std::max(best, v);
    }
    EXPECT_NEAR(spectral_radius_nonnegative(d).rho, best, 1e-10 * best);
  }
}

TEST(SpectralRadius, CollatzBracketOnPositiveTensor) {
  // The Perron value lies between min and max of (Z x^{m-1})_i / x_i^{m-1}
  // for any positive x.
  Rng rng(32);
  auto z = random_tensor(4, 3, rng, 0.1, 1.0);
  double rho = spectral_radius_nonnegative(z).rho;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x(3);
    for (auto& v : x) v = rng.uniform(0.1, 1.0);
    auto y = apply_tensor(z, x);
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 3; ++i) {
      double q = y[i] / std::pow(x[i], 3);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    EXPECT_LE(lo, rho * (1 + 1e-10));
    EXPECT_GE(hi, rho * (1 - 1e-10));
  }
}

TEST(HTensor, Identity) {
  auto h = is_h_tensor(identity_tensor<double>(4, 3));
  EXPECT_TRUE(h.h);
  EXPECT_TRUE(h.nonsingular);
  ASSERT_TRUE(h.y.has_value());
  for (double v : *h.y) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(HTensor, StrictlyDominatedVerifiesWithOnes) {
  auto a = small_negative_off(4, 3);
  auto h = is_h_tensor(a);
  EXPECT_TRUE(h.nonsingular);
  EXPECT_TRUE(verify_h_scaling(a, std::vector<double>(3, 1.0)));
}

TEST(HTensor, AllOneIsNotH) {
  // Comparison tensor: diagonal 1, off-diagonal -1, so s = 1 and Z has zero
  // diagonal with unit off-diagonal entries. All-ones is a Perron vector of
  // Z with value n^{m-1} - 1 = 26 > s.
  auto e = all_one_tensor<double>(4, 3);
  SymmetricTensor z = e;
  for (int i = 0; i < 3; ++i) z.set(MultiIndex(4, i), 0.0);
  auto y = apply_tensor(z, std::vector<double>{1, 1, 1});
  for (double v : y) EXPECT_DOUBLE_EQ(v, 26.0);

  auto h = is_h_tensor(e);
  EXPECT_NEAR(h.s, 1.0, 1e-15);
  EXPECT_NEAR(h.rho, 26.0, 1e-8);
  EXPECT_FALSE(h.h);
  EXPECT_FALSE(h.nonsingular);
}

TEST(ExtendedZ, Example51) {
  auto r = detect_extended_z(example51().cast<double>());
  EXPECT_TRUE(r.holds);
  ASSERT_EQ(r.blocks.size(), 2u);
  EXPECT_EQ(r.blocks[0].vars, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.blocks[0].tag, BlockTag::single_term);
  EXPECT_EQ(r.blocks[1].vars, (std::vector<int>{2, 3}));
  EXPECT_EQ(r.blocks[1].tag, BlockTag::single_term);
  EXPECT_FALSE(is_z_tensor(example51().cast<double>()));
}

TEST(ExtendedZ, ZTensorBlocksAreNonpositive) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_tensor(4, 4, rng, -1.0, 0.0);
    for (int i = 0; i < 4; ++i) a.set(MultiIndex(4, i), 3.0);
    ASSERT_TRUE(is_z_tensor(a));
    auto r = detect_extended_z(a);
    EXPECT_TRUE(r.holds);
    for (const auto& b : r.blocks)
      EXPECT_TRUE(b.tag == BlockTag::all_nonpositive || b.tag == BlockTag::single_term);
  }
}

TEST(ExtendedZ, TwoMixedTermsOnePositive) {
  auto r = detect_extended_z(tensor_of(4, 2, "1 4 0\n1 0 4\n1 2 2\n2 1 3\n"));
  EXPECT_FALSE(r.holds);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].tag, BlockTag::violated);
  EXPECT_EQ(r.blocks[0].mixed_terms, 2);
}

TEST(ExtendedZ, PermutationCovariant) {
  Rng rng(34);
  std::vector<SymmetricTensor> cases{example51().cast<double>(), example54(8).cast<double>(),
                                     tensor_of(4, 3, "1 4 0 0\n1 0 4 0\n1 0 0 4\n1 2 2 0\n2 1 3 0\n")};
  for (int k = 0; k < 5; ++k) cases.push_back(random_class(StructuredClass::psd_extended_z, 4, 4, rng));
  for (const auto& a : cases) {
    std::vector<int> perm(a.dim());
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 4; ++trial) {
      for (int i = a.dim() - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
      auto base = detect_extended_z(a);
      auto moved = detect_extended_z(relabel(a, perm));
      EXPECT_EQ(base.holds, moved.holds);
      ASSERT_EQ(base.blocks.size(), moved.blocks.size());
      std::vector<std::vector<int>> mapped;
      for (const auto& b : base.blocks) {
        std::vector<int> v;
        for (int i : b.vars) v.push_back(perm[i]);
        std::sort(v.begin(), v.end());
        mapped.push_back(v);
      }
      std::vector<std::vector<int>> got;
      for (const auto& b : moved.blocks) got.push_back(b.vars);
      std::sort(mapped.begin(), mapped.end());
      std::sort(got.begin(), got.end());
      EXPECT_EQ(mapped, got);
    }
  }
}

TEST(Cauchy, Construction) {
  auto a = cauchy_tensor({0.5, 0.5}, 2);
  for_each_canonical_index(2, 2, [&](const MultiIndex& idx) { EXPECT_DOUBLE_EQ(a.get(idx), 1.0); });
  auto b = cauchy_tensor({1, 1, 1}, 4);
  for_each_canonical_index(4, 3, [&](const MultiIndex& idx) { EXPECT_DOUBLE_EQ(b.get(idx), 0.25); });
  EXPECT_THROW(cauchy_tensor({1, -1}, 2), std::invalid_argument);
  auto exact = cauchy_tensor_exact({Rational(1), Rational(2), Rational(3)}, 4);
  EXPECT_EQ(exact.get({0, 1, 2, 2}), Rational(1, 9));
}

TEST(Cauchy, PsdCriterion) {
  EXPECT_TRUE(cauchy_is_psd({0.5, 2, 3}, 4));
  EXPECT_FALSE(cauchy_is_psd({-1, 2, 3}, 4));
  EXPECT_TRUE(cauchy_is_psd({1}, 4));
  EXPECT_THROW(cauchy_is_psd({1, 2}, 3), OddOrderError);
}

TEST(Cauchy, RiemannSumConverges) {
  // m = 2, c = (1, 1): entry (1,1) is sum_j (j/k)(1/k) = (k + 1) / (2k)
  for (int k : {10, 100, 1000}) {
    auto s = sum_of_powers(cauchy_cp_approx({1, 1}, 2, k), 2);
    EXPECT_NEAR(s.get({0, 0}), (k + 1.0) / (2.0 * k), 1e-12);
  }
  std::vector<double> c{0.5, 1.5};
  auto target = cauchy_tensor(c, 4);
  double prev = INFINITY;
  for (int k : {10, 100, 1000}) {
    auto us = cauchy_cp_approx(c, 4, k);
    for (const auto& u : us)
      for (double v : u) EXPECT_GT(v, 0.0);
    SymmetricTensor diff = sum_of_powers(us, 4);
    diff -= target;
    double err = frobenius_norm(diff);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

// Properties

TEST(StructuredProperty, ImplicationChain) {
  Rng rng(41);
  std::vector<SymmetricTensor> pool;
  for (auto c : all_structured_classes())
    for (int k = 0; k < 6; ++k) pool.push_back(random_class(c, 4, 3, rng));
  for (int k = 0; k < 30; ++k) {
    auto a = random_tensor(4, 3, rng, -0.3, 0.3);
    for (int i = 0; i < 3; ++i) a.set(MultiIndex(4, i), rng.uniform(0.5, 3.0));
    pool.push_back(a);
    auto z = random_tensor(4, 3, rng, -0.3, 0.0);
    for (int i = 0; i < 3; ++i) z.set(MultiIndex(4, i), rng.uniform(-1.0, 3.0));
    pool.push_back(z);
  }
  int dd = 0, z = 0, qdb = 0;
  for (const auto& a : pool) {
    auto d = is_diagonally_dominated(a);
    if (d.strict) {
      EXPECT_TRUE(d.weak);
      ++dd;
    }
    if (is_z_tensor(a)) {
      EXPECT_TRUE(detect_extended_z(a).holds);
      ++z;
    }
    auto b = classify_b_family(a);
    if (b.quasi_double_b0.holds) {
      EXPECT_TRUE(b.mb0.holds);
      ++qdb;
    }
  }
  EXPECT_GT(dd, 0);
  EXPECT_GT(z, 0);
  EXPECT_GT(qdb, 0);
}

TEST(StructuredProperty, B0SplitReconstructsExactly) {
  Rng rng(42);
  // rows in J of 220 I + E^J: (220 + 2^5) / 3^5 >= 1
  ExactTensor partial = identity_tensor<Rational>(6, 3) * Rational(220);
  partial += partially_all_one_tensor<Rational>(6, 3, {0, 2});
  std::vector<ExactTensor> cases{all_one_tensor<Rational>(4, 3), partial};
  for (int k = 0; k < 10; ++k) cases.push_back(to_exact(random_class(StructuredClass::b0, 4, 3, rng)));
  for (int k = 0; k < 5; ++k) cases.push_back(to_exact(random_class(StructuredClass::b0, 6, 2, rng)));
  for (const auto& a : cases) {
    auto s = b0_split(a);
    ExactTensor sum = s.m;
    for (const auto& [h, j] : s.terms) {
      EXPECT_GT(h, 0);
      sum += partially_all_one_tensor<Rational>(a.order(), a.dim(), j) * h;
    }
    EXPECT_EQ(sum, a);
    // M is a diagonally dominated Z-tensor
    auto m = s.m.cast<double>();
    EXPECT_TRUE(is_z_tensor(m));
    EXPECT_TRUE(is_diagonally_dominated(m, 1e-9).strict);
    // index sets are nested
    for (std::size_t k = 1; k < s.terms.size(); ++k)
      EXPECT_TRUE(std::includes(s.terms[k - 1].second.begin(), s.terms[k - 1].second.end(), s.terms[k].second.begin(),
                                s.terms[k].second.end()));
  }
}

TEST(StructuredProperty, HScalingVerifies) {
  Rng rng(43);
  int checked = 0;
  for (int k = 0; k < 20; ++k) {
    auto a = random_class(StructuredClass::h_nonneg_diagonal, 4, 3, rng);
    auto h = is_h_tensor(a);
    EXPECT_TRUE(h.h);
    if (h.nonsingular) {
      ASSERT_TRUE(h.y.has_value());
      for (double v : *h.y) EXPECT_GT(v, 0.0);
      EXPECT_TRUE(verify_h_scaling(a, *h.y));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(StructuredProperty, PsdCauchyHasNonnegativeMinimum) {
  Rng rng(44);
  for (int k = 0; k < 10; ++k) {
    int n = 2 + k % 2;
    std::vector<double> c(n);
    for (auto& v : c) v = rng.uniform(0.1, 3.0);
    ASSERT_TRUE(cauchy_is_psd(c, 4));
    OracleOptions o;
    o.seed = k + 1;
    EXPECT_GE(brute_force_min(cauchy_tensor(c, 4), o).value, -1e-6);
  }
}

TEST(StructuredProperty, RandomClassMembersSatisfyRecognizers) {
  Rng rng(45);
  for (int k = 0; k < 5; ++k) {
    EXPECT_TRUE(is_diagonally_dominated(random_class(StructuredClass::weakly_diagonally_dominated, 4, 3, rng)).weak);
    EXPECT_TRUE(is_b0(random_class(StructuredClass::b0, 4, 3, rng)).holds);
    EXPECT_TRUE(classify_b_family(random_class(StructuredClass::double_b, 4, 3, rng)).double_b.holds);
    EXPECT_TRUE(classify_b_family(random_class(StructuredClass::mb0, 4, 3, rng)).mb0.holds);
    EXPECT_TRUE(detect_extended_z(random_class(StructuredClass::psd_extended_z, 4, 3, rng)).holds);
  }
}
