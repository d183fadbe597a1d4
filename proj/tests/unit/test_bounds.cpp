#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "stpis/bounds.hpp"
#include "stpis/errors.hpp"
#include "stpis/sampler.hpp"
#include "stpis/stepsize.hpp"

using namespace stpis;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

BoundInputs inputs(const DenseVector& l, double eps = 0.01, double r0 = 3.0) {
  BoundInputs in{CoordinateSmoothness(l), DenseVector(l.size(), 1.0 / static_cast<double>(l.size())),
                 DenseVector(l.size(), 1.0), eps, r0, 2.0, 0.5};
  return in;
}

BoundInputs with_sqrt(BoundInputs in) {
  in.p = CoordinateSampler::from_sqrt_smoothness(in.l).probabilities();
  in.v = make_scaling(ScalingRule::SqrtL, in.l);
  return in;
}

BoundInputs with_linear(BoundInputs in) {
  in.p = CoordinateSampler::from_smoothness(in.l).probabilities();
  in.v = in.l.values();
  return in;
}

double sum_sqrt(const DenseVector& l) {
  double s = 0.0;
  for (double v : l) s += std::sqrt(v);
  return s;
}

double sum(const DenseVector& l) {
  double s = 0.0;
  for (double v : l) s += v;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("nonconvex decay closed forms") {
    const DenseVector l{0.5, 2.0, 9.0, 30.0};
    const auto base = inputs(l);
    const double eps = base.epsilon, r0 = base.r0, ss = sum_sqrt(l);
    CHECK(rel(k_nonconvex_decay(with_sqrt(base)), 4 * kSqrt2 * r0 * ss * ss / (eps * eps)) <= 1e-12);

    // uniform p with v_i = L (the common max): S = sum L / (n L^2), min p/v = 1/(n L)
    const auto uni = uniform_baseline(base);
    const double n = 4, big = 30.0;
    CHECK(rel(k_nonconvex_decay(uni), 4 * kSqrt2 * r0 * n * sum(l) / (eps * eps)) <= 1e-12);
    CHECK(k_nonconvex_decay(uni) <= 4 * kSqrt2 * r0 * n * n * big / (eps * eps));

    const auto flat = uniform_baseline(inputs(DenseVector(4, 7.0)));
    CHECK(rel(k_nonconvex_decay(flat), 4 * kSqrt2 * r0 * n * n * 7.0 / (eps * eps)) <= 1e-12);

    const auto single = inputs(DenseVector{5.0});
    const double k1 = k_nonconvex_decay(single);
    CHECK(rel(k_nonconvex_decay(with_sqrt(single)), k1) <= 1e-12);
    CHECK(rel(k_nonconvex_decay(with_linear(single)), k1) <= 1e-12);
    CHECK(rel(k_nonconvex_decay(uniform_baseline(single)), k1) <= 1e-12);
  }

  TEST_CASE("decay bound at alpha0* is the minimum over alpha0") {
    const auto in = with_sqrt(inputs(DenseVector{1.0, 3.0, 10.0}));
    const double a = optimal_alpha0(in.l, in.p.span(), in.v.span(), in.r0);
    CHECK(rel(k_nonconvex_decay_at(in, a), k_nonconvex_decay(in)) <= 1e-12);
    for (double f : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0}) CHECK(k_nonconvex_decay_at(in, a * f) > k_nonconvex_decay(in));
  }

  TEST_CASE("nonconvex fixed closed forms") {
    const DenseVector l{0.5, 2.0, 9.0, 30.0};
    const auto base = inputs(l);
    const double eps = base.epsilon, r0 = base.r0;
    CHECK(rel(k_nonconvex_fixed(with_linear(base)), 4 * r0 * 4 * sum(l) / (eps * eps)) <= 1e-12);
    const auto uni_flat = uniform_baseline(inputs(DenseVector(4, 3.0)));
    CHECK(rel(k_nonconvex_fixed(uni_flat), 4 * r0 * 16 * 3.0 / (eps * eps)) <= 1e-12);
    // uniform grows like n^2 L at fixed L
    const double k4 = k_nonconvex_fixed(uniform_baseline(inputs(DenseVector(4, 3.0))));
    const double k8 = k_nonconvex_fixed(uniform_baseline(inputs(DenseVector(8, 3.0))));
    CHECK(rel(k8 / k4, 4.0) <= 1e-12);
  }

  TEST_CASE("fixed feasibility boundary is an error naming both sides") {
    // n = 1, p = 1, v = 1: lhs = L, rhs = 2
    auto in = inputs(DenseVector{2.0});
    const auto feas = fixed_feasibility(in);
    CHECK(feas.lhs == 2.0);
    CHECK(feas.rhs == 2.0);
    CHECK_FALSE(feas.feasible());
    try {
      (void)k_nonconvex_fixed(in);
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("= 2 ") != std::string::npos);
      CHECK(what.find("min p_i/v_i = 2") != std::string::npos);
    }
    in.l = CoordinateSmoothness(DenseVector{1.999});
    CHECK(k_nonconvex_fixed(in) > 0.0);
    const auto rows = bound_rows("x", inputs(DenseVector{2.0}));
    CHECK_FALSE(rows[1].k.has_value());
    CHECK(rows[1].note.find("infeasible") == 0);
  }

  TEST_CASE("convex closed forms") {
    const DenseVector l{0.5, 2.0, 9.0, 30.0};
    const auto in = with_linear(inputs(l));
    const double r = *in.level_radius;
    CHECK(rel(k_convex(in), 8 * r * r * 4 * sum(l) * (1 / in.epsilon - 1 / in.r0)) <= 1e-12);
    auto at = in;
    at.epsilon = at.r0;
    CHECK(k_convex(at) == 0.0);
    auto missing = in;
    missing.level_radius.reset();
    CHECK_THROWS_AS(k_convex(missing), ConfigError);
  }

  TEST_CASE("strongly convex closed forms") {
    const DenseVector l{0.5, 2.0, 9.0, 30.0};
    const auto in = with_linear(inputs(l));
    CHECK(rel(k_strongly_convex(in), sum(l) / *in.lambda * std::log(2 * in.r0 / in.epsilon)) <= 1e-12);
    auto at = in;
    at.epsilon = 2 * at.r0;
    CHECK(k_strongly_convex(at) == 0.0);
    const auto rows = bound_rows("L", in);
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].regime == Regime::StronglyConvex);
    CHECK(rows[3].note.find("log(r0/eps)") != std::string::npos);
  }

  TEST_CASE("importance sampling never loses to uniform (1000 random L)") {
    oracle::Gen gen(61);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 2 + gen.index(63);
      DenseVector l(n);
      for (auto& v : l) v = gen.log_uniform(1e-3, 1e3);
      const auto base = inputs(l);
      const auto uni = uniform_baseline(base);
      const auto sq = with_sqrt(base), lin = with_linear(base);
      CHECK(k_nonconvex_decay(sq) < k_nonconvex_decay(uni));
      CHECK(k_nonconvex_fixed(lin) < k_nonconvex_fixed(uni));
      CHECK(k_convex(lin) < k_convex(uni));
      CHECK(k_strongly_convex(lin) < k_strongly_convex(uni));
    }
    for (std::size_t n : {2u, 5u, 64u}) {
      const auto base = inputs(DenseVector(n, 3.7));
      const auto uni = uniform_baseline(base);
      CHECK(rel(k_nonconvex_decay(with_sqrt(base)), k_nonconvex_decay(uni)) <= 1e-12);
      CHECK(rel(k_nonconvex_fixed(with_linear(base)), k_nonconvex_fixed(uni)) <= 1e-12);
      CHECK(rel(k_convex(with_linear(base)), k_convex(uni)) <= 1e-12);
      CHECK(rel(k_strongly_convex(with_linear(base)), k_strongly_convex(uni)) <= 1e-12);
    }
  }

  TEST_CASE("decay bound is free of the scale of v once alpha0 is re-optimized") {
    oracle::Gen gen(62);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + gen.index(20);
      DenseVector l(n);
      for (auto& v : l) v = gen.log_uniform(1e-2, 1e2);
      auto in = with_sqrt(inputs(l));
      const double c = gen.log_uniform(1e-3, 1e3);
      auto scaled = in;
      for (auto& v : scaled.v) v *= c;
      const double a = optimal_alpha0(in.l, in.p.span(), in.v.span(), in.r0);
      const double a_scaled = optimal_alpha0(scaled.l, scaled.p.span(), scaled.v.span(), scaled.r0);
      CHECK(rel(a_scaled, a * c) <= 1e-12);
      CHECK(rel(k_nonconvex_decay_at(scaled, a_scaled), k_nonconvex_decay_at(in, a)) <= 1e-12);
    }
  }

  TEST_CASE("bounds fall strictly as epsilon grows") {
    oracle::Gen gen(63);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + gen.index(10);
      DenseVector l(n);
      for (auto& v : l) v = gen.log_uniform(1e-2, 1e2);
      auto a = with_linear(inputs(l, 1e-3, 1.0)), b = a;
      b.epsilon = 2e-3;
      CHECK(k_nonconvex_decay(b) < k_nonconvex_decay(a));
      if (fixed_feasibility(a).feasible()) CHECK(k_nonconvex_fixed(b) < k_nonconvex_fixed(a));
      CHECK(k_convex(b) < k_convex(a));
      CHECK(k_strongly_convex(b) < k_strongly_convex(a));
      CHECK(t_upper_bound_convex(b).value > t_upper_bound_convex(a).value);
    }
  }

  TEST_CASE("convex t bound terms") {
    // n = 1, L = p = v = 1, eps = 0.01, r0 = 3, R0 = 2: probe = sqrt(2 * 3) = sqrt(6), S3 = 1
    const auto in = inputs(DenseVector{1.0});
    const auto t = t_upper_bound_convex(in);
    const double probe = std::sqrt(6.0);
    CHECK(rel(t.terms[0], 1e-4 / (8 * 4 * probe)) <= 1e-14);
    CHECK(rel(t.terms[1], 0.01 / 2) <= 1e-14);
    CHECK(rel(t.terms[2], 0.01 / (2 * probe)) <= 1e-14);
    CHECK(rel(t.terms[3], 2 * std::sqrt(0.01)) <= 1e-14);
    CHECK(t.value == *std::min_element(t.terms.begin(), t.terms.end()));
    auto smaller = in;
    smaller.epsilon /= 10;
    const auto ts = t_upper_bound_convex(smaller);
    for (std::size_t k = 0; k < 4; ++k) CHECK(ts.terms[k] < t.terms[k]);
  }

  TEST_CASE("strongly convex t bound solves its quadratic") {
    oracle::Gen gen(64);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + gen.index(10);
      DenseVector l(n);
      for (auto& v : l) v = gen.log_uniform(1e-2, 1e2);
      const auto in = with_linear(inputs(l, gen.log_uniform(1e-6, 1e-1), gen.log_uniform(0.1, 10)));
      const double tb = t_upper_bound_strongly_convex(in);
      const double mu = *in.lambda / max_v_over_p(in);
      double s3 = 0.0, maxp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s3 += in.p[i] * l[i] * l[i] * l[i] / (in.v[i] * in.v[i]);
        maxp = std::max(maxp, in.p[i]);
      }
      const double b = std::sqrt(maxp) * std::sqrt(2.0 * n * in.l.max() * in.r0);
      CHECK(rel((tb * b + tb * tb / 8 * s3) / mu, in.epsilon / 2) <= 1e-10);
    }
  }

  TEST_CASE("input validation") {
    auto in = inputs(DenseVector{1.0, 2.0});
    in.epsilon = 0.0;
    CHECK_THROWS_AS(k_nonconvex_decay(in), ConfigError);
    in = inputs(DenseVector{1.0, 2.0});
    in.r0 = -1.0;
    CHECK_THROWS_AS(k_convex(in), ConfigError);
    in = inputs(DenseVector{1.0, 2.0});
    in.p = DenseVector{1.0};
    CHECK_THROWS_AS(k_nonconvex_decay(in), DimensionError);
    CHECK(to_string(Regime::NonconvexFixed) == "nonconvex-fixed");
  }
}
