#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "stpis/errors.hpp"
#include "stpis/lipschitz_est.hpp"
#include "stpis/problems.hpp"

using namespace stpis;

namespace {

/// c + g.x + 1/2 sum h_i x_i^2
double model(double c, const std::vector<double>& g, const std::vector<double>& h, std::span<const double> x) {
  double v = c;
  for (std::size_t i = 0; i < x.size(); ++i) v += g[i] * x[i] + 0.5 * h[i] * x[i] * x[i];
  return v;
}

SampleBuffer model_buffer(oracle::Gen& gen, double c, const std::vector<double>& g, const std::vector<double>& h,
                          std::size_t count, double spread = 2.0) {
  SampleBuffer buf(g.size(), count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> x(g.size());
    for (auto& v : x) v = gen.uniform(-spread, spread);
    buf.push(x, model(c, g, h, x));
  }
  return buf;
}

}  // namespace

TEST_SUITE("lipschitz_est") {
  TEST_CASE("recovers (3, 2, 5) in one dimension") {
    oracle::Gen gen(51);
    const auto buf = model_buffer(gen, 3.0, {2.0}, {5.0}, 10);
    const auto s = fit_surrogate(buf);
    CHECK(std::abs(s.c - 3.0) <= 1e-8);
    CHECK(std::abs(s.g[0] - 2.0) <= 1e-8);
    CHECK(std::abs(s.h[0] - 5.0) <= 1e-8);
  }

  TEST_CASE("recovers h = [1, 4] from 20 points") {
    oracle::Gen gen(52);
    const auto s = fit_surrogate(model_buffer(gen, -1.0, {0.5, -2.0}, {1.0, 4.0}, 20));
    CHECK(std::abs(s.h[0] - 1.0) <= 1e-6);
    CHECK(std::abs(s.h[1] - 4.0) <= 1e-6);
  }

  TEST_CASE("exact recovery on random diagonal quadratics from 2n+1 points") {
    oracle::Gen gen(53);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + gen.index(12);
      std::vector<double> g(n), h(n);
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = gen.normal();
        h[i] = gen.log_uniform(0.1, 100.0);
      }
      const auto s = fit_surrogate(model_buffer(gen, gen.normal(), g, h, 2 * n + 1));
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s.h[i] - h[i]) <= 1e-6 * h[i]);
    }
  }

  TEST_CASE("constant data gives zero slope and floored curvature") {
    SampleBuffer buf(2, 16);
    oracle::Gen gen(54);
    for (int k = 0; k < 16; ++k) {
      const std::vector<double> x{gen.normal(), gen.normal()};
      buf.push(x, 4.0);
    }
    const auto s = fit_surrogate(buf);
    CHECK(std::abs(s.g[0]) <= 1e-8);
    CHECK(std::abs(s.g[1]) <= 1e-8);
    const auto l = estimated_smoothness(s);
    for (std::size_t i = 0; i < 2; ++i) CHECK(l[i] <= 1e-6);
  }

  TEST_CASE("estimated_smoothness clamps") {
    QuadraticSurrogate s{0.0, DenseVector{0.0, 0.0}, DenseVector{2.0, 3.0}};
    CHECK(estimated_smoothness(s).values() == DenseVector{2.0, 3.0});
    s.h = DenseVector{-1.0, 2.0};
    const auto l = estimated_smoothness(s);
    CHECK(l.values() == DenseVector{1e-12, 2.0});
    CHECK(l.clamped() == std::vector<std::size_t>{0});
  }

  TEST_CASE("too few samples is a configuration error") {
    oracle::Gen gen(55);
    CHECK_THROWS_AS(fit_surrogate(model_buffer(gen, 0.0, {1.0, 1.0}, {1.0, 1.0}, 4)), ConfigError);
  }

  TEST_CASE("a repeated point whose scale swamps the damping is reported") {
    SampleBuffer buf(2, 10);
    for (int k = 0; k < 10; ++k) {
      const std::vector<double> x{1e4, 1e4};
      buf.push(x, 2.0);
    }
    CHECK_THROWS_AS(fit_surrogate(buf), NumericalError);
  }

  TEST_CASE("ridge with a diagonally dominant matrix lands within 25%") {
    oracle::Gen gen(56);
    const std::size_t m = 40, n = 6;
    oracle::Dense d(m, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
      d[r][r % n] = 2.0 + gen.uniform(0.0, 3.0);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != r % n && gen.coin(0.3)) d[r][c] = 0.05 * gen.normal();
      }
    }
    RidgeProblem prob(oracle::to_sparse(d), DenseVector(gen.normals(m)), 0.1);
    const auto exact = exact_smoothness(prob);
    SampleBuffer buf(n, 3 * n);
    for (std::size_t k = 0; k < 3 * n; ++k) {
      const auto x = gen.normals(n);
      buf.push(x, prob.value(x));
    }
    const auto est = estimated_smoothness(fit_surrogate(buf));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(est[i] - exact[i]) <= 0.25 * exact[i]);
  }

  TEST_CASE("more data from the model class never worsens the fit") {
    oracle::Gen gen(57);
    const std::vector<double> g{0.2, -0.4, 1.0}, h{3.0, 0.5, 8.0};
    SampleBuffer buf(3, 200);
    double previous = INFINITY;
    for (std::size_t k = 0; k < 200; ++k) {
      std::vector<double> x(3);
      for (auto& v : x) v = gen.uniform(-1.0, 1.0);
      buf.push(x, model(1.0, g, h, x));
      if (buf.size() >= 7 && buf.size() % 10 == 0) {
        const auto s = fit_surrogate(buf);
        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(s.h[i] - h[i]) / h[i]);
        CHECK(err <= std::max(previous, 1e-9));
        previous = err;
      }
    }
  }

  TEST_CASE("ring buffer evicts oldest first") {
    SampleBuffer buf(1, 3);
    for (int k = 0; k < 5; ++k) {
      const std::vector<double> x{static_cast<double>(k)};
      buf.push(x, 10.0 * k);
    }
    CHECK(buf.size() == 3);
    CHECK(buf.point(0)[0] == 2.0);
    CHECK(buf.value(0) == 20.0);
    CHECK(buf.point(2)[0] == 4.0);
    CHECK(buf.value(2) == 40.0);
    CHECK(SampleBuffer(4).capacity() == 4096);
    CHECK_THROWS_AS(buf.push(std::vector<double>{1.0, 2.0}, 0.0), DimensionError);
  }

  TEST_CASE("refresh policy") {
    for (std::uint64_t k = 0; k < 10; ++k) CHECK(refresh_policy(k, 1));
    CHECK_FALSE(refresh_policy(49, 50));
    CHECK(refresh_policy(100, 50));
    CHECK_THROWS_AS(refresh_policy(3, 0), ConfigError);
  }
}
