// Copyright 2026 The matfunc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include "gtest/gtest.h"

#include "matfunc/matfunc.hpp"
#include "oracle.hpp"

using namespace matfunc;

namespace {

PolynomialSpec random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> c(degree + 1);
  for (auto& x : c) x = cplx(u(rng), u(rng));
  return PolynomialSpec::from_coefficients(c);
}

DenseMatrix dense_poly(const DenseMatrix& a, const PolynomialSpec& p) { return oracle::naive_poly(a, p.coefficients); }

}  // namespace

TEST(exact_path, entries_and_lm_match_dense_powers) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 6; ++trial) {
    const auto o = oracle::random_sparse(rng, 16, 3, 1.0);
    const auto d = to_dense(o);
    for (int m = 0; m <= 5; ++m) {
      const auto am = oracle::naive_power(d, m);
      for (index_t i : {0u, 5u, 15u}) {
        ASSERT_LT(std::abs(exact_entry_path(o, i, 3, m) - am(i, 3)), 1e-12);
        ASSERT_LT(std::abs(exact_lm_path(o, i, i, m, m) - oracle::lm_of(am, i)), 1e-12);
      }
    }
  }
}

TEST(exact_path, polynomial_evaluator_matches_dense) {
  std::mt19937_64 rng(2);
  const auto o = oracle::random_sparse(rng, 32, 4, 1.0);
  const auto d = to_dense(o);
  const auto p = random_poly(rng, 9);
  const auto fa = dense_poly(d, p);
  for (index_t i = 0; i < 32; i += 7) {
    EXPECT_LT(std::abs(exact_entry_poly(o, p, i, 2) - fa(i, 2)), 1e-11);
    const auto parts = exact_lm_parts(o, p, i);
    EXPECT_NEAR(parts.num, oracle::lm_of(fa, i), 1e-11);
    EXPECT_NEAR(parts.den, oracle::column_norm2(fa, i), 1e-11);
    EXPECT_NEAR(exact_lm_poly(o, p, i, true), oracle::lm_of(fa, i) / oracle::column_norm2(fa, i), 1e-11);
  }
}

TEST(hoeffding, sample_counts) {
  EXPECT_EQ(hoeffding_complex(1.0, 0.1, 0.05), static_cast<std::uint64_t>(std::ceil(400 * std::log(80.0))));
  EXPECT_EQ(hoeffding_real(2.0, 0.1, 0.05), static_cast<std::uint64_t>(std::ceil(800 * std::log(40.0))));
  EXPECT_THROW(hoeffding_complex(1e6, 1e-3, 0.01), CapExceeded);
}

// Property: results do not depend on the worker count.
TEST(sample_mean, independent_of_worker_count) {
  auto f = [](RandomStream& r) { return cplx(r.uniform(), r.uniform() - 0.5); };
  const cplx one = sample_mean(50000, 42, 1, f);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(sample_mean(50000, 42, w, f), one);
  EXPECT_NE(sample_mean(50000, 43, 1, f), one);
}

// Property: MC estimates land within their half-width in nearly all trials.
TEST(mc_sparse, entry_and_lm_within_half_width) {
  std::mt19937_64 rng(3);
  int entry_hits = 0, lm_hits = 0, norm_hits = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const auto o = oracle::random_sparse(rng, 16, 3, 1.0);
    const auto p = random_poly(rng, 3);
    const auto fa = dense_poly(to_dense(o), p);
    const McConfig cfg{0.1, 0.05, static_cast<std::uint64_t>(t), 1};
    const auto e = mc_entry_sparse(o, p, 1, 4, cfg);
    entry_hits += std::abs(e.value - fa(1, 4)) <= e.half_width;
    const auto l = mc_lm(o, p, 3, cfg);
    lm_hits += std::abs(l.value.real() - oracle::lm_of(fa, 3)) <= l.half_width;
    const auto n = mc_lm(o, p, 3, cfg, true);
    norm_hits += std::abs(n.value.real() - oracle::column_norm2(fa, 3)) <= n.half_width;
    ASSERT_EQ(e.samples, hoeffding_complex(l1_rescaled_norm(p, 1.0), 0.1, 0.05));
  }
  EXPECT_GE(entry_hits, trials - 3);
  EXPECT_GE(lm_hits, trials - 3);
  EXPECT_GE(norm_hits, trials - 3);
}

TEST(mc_pauli, entry_and_lm_within_half_width) {
  std::mt19937_64 rng(4);
  int hits = 0, lm_hits = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const PauliAccess pa(oracle::random_pauli(rng, 3, 5, 1.0));
    const auto p = random_poly(rng, 3);
    const auto fa = dense_poly(oracle::operator_matrix(pa.op()), p);
    const McConfig cfg{0.1, 0.05, static_cast<std::uint64_t>(100 + t), 2};
    const auto e = mc_entry_pauli(pa, p, 2, 6, cfg);
    hits += std::abs(e.value - fa(2, 6)) <= e.half_width;
    const auto l = mc_lm(pa, p, 5, cfg);
    lm_hits += std::abs(l.value.real() - oracle::lm_of(fa, 5)) <= l.half_width;
  }
  EXPECT_GE(hits, trials - 3);
  EXPECT_GE(lm_hits, trials - 3);
}

TEST(mc, constant_polynomials_are_exact) {
  std::mt19937_64 rng(5);
  const auto o = oracle::random_sparse(rng, 8, 2, 1.0);
  const auto p = PolynomialSpec::from_coefficients({cplx(0.5, 0.5)});
  EXPECT_EQ(mc_entry_sparse(o, p, 3, 3, {}).value, cplx(0.5, 0.5));
  EXPECT_EQ(mc_entry_sparse(o, p, 3, 2, {}).value, cplx(0.0));
  EXPECT_NEAR(mc_lm(o, p, 1, {}).value.real(), 0.5, 1e-15);
  EXPECT_NEAR(mc_lm(o, p, 6, {}).value.real(), 0.0, 1e-15);
}

TEST(mc, missing_norm_metadata_beyond_cap_is_an_error) {
  SparseOracle o = sparse_from_triplets(4, {{0, 0, 1.0}});
  o.dim = caps().dense_dim + 1;
  EXPECT_THROW(mc_entry_sparse(o, PolynomialSpec::monomial(1), 0, 0, {}), PreconditionError);
}

TEST(supersparse_cb, matches_dense) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto t = oracle::random_hermitian_triplets(rng, 64, 2);
    t.resize(std::min<std::size_t>(t.size(), 8));
    std::vector<SuperSparseMatrix::Entry> es;
    for (const auto& [i, j, v] : t) {
      if (i != j && std::none_of(t.begin(), t.end(), [&](const auto& x) { return std::get<0>(x) == j && std::get<1>(x) == i; }))
        continue;
      es.push_back({i, j, v});
    }
    const SuperSparseMatrix m(64, es);
    const auto d = to_dense(m);
    const auto p = random_poly(rng, 12);
    const auto fa = dense_poly(d, p);
    for (index_t i : {index_t{0}, es.front().i, es.back().j, index_t{63}}) {
      ASSERT_LT(std::abs(supersparse_entry(m, p, i, es.front().j) - fa(i, es.front().j)), 1e-10);
      ASSERT_NEAR(supersparse_lm(m, p, i), oracle::lm_of(fa, i), 1e-10);
    }
  }
}

TEST(pauli_supersparse, matches_dense) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliAccess pa(oracle::random_pauli(rng, 5, 4, 1.2));
    const auto p = random_poly(rng, 10);
    const auto fa = dense_poly(oracle::operator_matrix(pa.op()), p);
    const auto applied = pauli_supersparse_apply(pa, p);
    EXPECT_LE(applied.size(), 16u);
    for (index_t i : {0u, 9u, 31u}) {
      ASSERT_LT(std::abs(pauli_supersparse_entry(pa, p, i, 17) - fa(i, 17)), 1e-10);
      ASSERT_NEAR(pauli_supersparse_lm(pa, p, i), oracle::lm_of(fa, i), 1e-10);
      ASSERT_NEAR(pauli_supersparse_lm(pa, p, i, true), oracle::lm_of(fa, i) / oracle::column_norm2(fa, i), 1e-10);
    }
  }
}

TEST(sketch, size_formula_and_unbiased_coefficients) {
  EXPECT_EQ(sketch_size(1.0, 0.5, 0.1, 8), static_cast<std::uint64_t>(std::ceil(32.0 * std::log(160.0))));
  const PauliAccess pa(PauliOperator(2, {{0.6, PauliString::from_word("XI")}, {-0.4, PauliString::from_word("ZZ")}}));
  RandomStream rng(3);
  const auto s = sketch_pauli(pa, 100000, rng);
  EXPECT_NEAR(s.op().coefficient(PauliString::from_word("XI")).real(), 0.6, 0.01);
  EXPECT_NEAR(s.op().coefficient(PauliString::from_word("ZZ")).real(), -0.4, 0.01);
  EXPECT_NEAR(s.lambda(), 1.0, 1e-12);
}

TEST(sketch, then_eval_within_eps) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixMeta meta;
    meta.eta = 0.5;
    const PauliAccess pa(oracle::random_pauli(rng, 3, 6, 0.5), meta);
    const auto p = PolynomialSpec::monomial(2);
    const auto fa = oracle::naive_power(oracle::operator_matrix(pa.op()), 2);
    const auto e = sketch_then_eval(pa, p, Target::entry(1, 1), 0.2, 0.1, trial);
    EXPECT_LE(std::abs(e.value - fa(1, 1)), 0.2);
    const auto l = sketch_then_eval(pa, p, Target::lm(2), 0.2, 0.1, trial);
    EXPECT_LE(std::abs(l.value.real() - oracle::lm_of(fa, 2)), 0.2);
  }
  const PauliAccess no_gap(PauliOperator::single(2, 0, 'X', 0.5));
  EXPECT_THROW(sketch_then_eval(no_gap, PolynomialSpec::monomial(2), Target::entry(0, 0), 0.1, 0.1, 0),
               PreconditionError);
}

TEST(ratio, propagates_half_widths) {
  Estimate num, den;
  num.value = 0.2;
  num.half_width = 0.01;
  den.value = 0.5;
  den.half_width = 0.02;
  const auto r = ratio_estimate(num, den);
  EXPECT_NEAR(r.value.real(), 0.4, 1e-15);
  EXPECT_NEAR(r.half_width, (0.01 + 0.4 * 0.02) / (0.5 - 0.02), 1e-15);
}

TEST(norm_decay, zero_past_threshold_and_exact_below) {
  std::mt19937_64 rng(9);
  auto t = oracle::random_hermitian_triplets(rng, 16, 3, true);
  const double c = 0.7 / oracle::triplet_one_norm(16, t);
  for (auto& e : t) std::get<2>(e) *= c;
  MatrixMeta meta;
  meta.eta = 0.3;
  const auto m = MatrixInstance::from_sparse(sparse_from_triplets(16, t, meta));
  const auto d = to_dense(*m.sparse);
  const McConfig cfg{0.05, 0.05, 1, 1};
  const double threshold = std::log(0.05) / std::log(0.7);
  for (int power : {1, 4, 8, 9, 20, 40}) {
    const auto e = norm_decay_entry(m, power, 2, 2, cfg);
    const double truth = std::abs(oracle::naive_power(d, power)(2, 2));
    EXPECT_LE(truth, std::pow(0.7, power) + 1e-12);
    if (power > threshold) {
      EXPECT_EQ(e.value, cplx(0.0));
      EXPECT_LE(truth, e.half_width + 1e-15);
      EXPECT_LE(e.half_width, 0.05);
    } else {
      EXPECT_NEAR(e.value.real(), oracle::naive_power(d, power)(2, 2).real(), 1e-12);
    }
  }
  MatrixInstance no_eta = MatrixInstance::from_sparse(sparse_from_triplets(16, t));
  EXPECT_THROW(norm_decay_entry(no_eta, 3, 0, 0, cfg), PreconditionError);
}

TEST(inverse, entry_and_lm_against_dense_inverse) {
  // diagonal-dominant Hermitian with spectrum inside [1/kappa, 1]
  std::mt19937_64 rng(10);
  auto t = oracle::random_hermitian_triplets(rng, 8, 2, true);
  for (auto& [i, j, v] : t) v = i == j ? 0.75 : 0.1 * v;
  MatrixMeta meta;
  meta.op_norm = 1.0;
  meta.one_norm = oracle::triplet_one_norm(8, t);
  const auto m = MatrixInstance::from_sparse(sparse_from_triplets(8, t, meta));
  const auto inv = oracle::spectral_function(to_dense(*m.sparse), [](double x) { return 1.0 / x; });
  const McConfig cfg{0.05, 0.05, 3, 1};
  const auto e = inverse_entry(m, 2.0, 1, 1, Algorithm::ExactPath, cfg);
  EXPECT_LE(std::abs(e.value - inv(1, 1)), e.half_width + 1e-12);
  EXPECT_LE(e.half_width, 0.05);
  const auto l = inverse_lm(m, 2.0, 1, Algorithm::ExactPath, cfg);
  EXPECT_LE(std::abs(l.value.real() - oracle::lm_of(inv, 1)), l.half_width + 1e-12);
}

TEST(time_evolution, deterministic_and_sampled_against_dense_exponential) {
  std::mt19937_64 rng(11);
  const PauliAccess pa(oracle::random_pauli(rng, 3, 4, 1.0));
  const auto m = MatrixInstance::from_pauli(pa);
  const double t = 1.3;
  const auto u = oracle::spectral_function(oracle::operator_matrix(pa.op()), [t](double x) { return std::exp(cplx(0, x * t)); });
  const McConfig cfg{0.05, 0.05, 7, 1};
  for (auto alg : {Algorithm::ExactPath, Algorithm::SupersparsePauli}) {
    const auto e = timeevo_entry(m, t, 2, 3, alg, cfg);
    EXPECT_LE(std::abs(e.value - u(2, 3)), e.half_width + 1e-12) << algorithm_name(alg);
    EXPECT_LE(e.half_width, 0.05);
  }
  const auto mc = timeevo_entry(m, t, 2, 3, Algorithm::McPauli, cfg);
  EXPECT_LE(std::abs(mc.value - u(2, 3)), mc.half_width);
  const auto lm = timeevo_lm(m, t, 6, Algorithm::McPauli, cfg);
  EXPECT_LE(std::abs(lm.value.real() - oracle::lm_of(u, 6)), lm.half_width);
  const auto zero = timeevo_entry(m, 0.0, 4, 4, Algorithm::McPauli, cfg);
  EXPECT_EQ(zero.value, cplx(1.0));
  EXPECT_EQ(zero.half_width, 0.0);
}
