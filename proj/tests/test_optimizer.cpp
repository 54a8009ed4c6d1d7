#include <doctest.h>

#include <cmath>
#include <numbers>

#include "risrsma/optimizer.hpp"
#include "risrsma/qcqp.hpp"
#include "risrsma/quasi_newton.hpp"

using namespace risrsma;

namespace {

const double kPi = std::numbers::pi;

TransmitSetup setup(int n_tx, double power = 1.0, double noise = 1.0, int n_aps = 1) {
  return TransmitSetup{n_tx, RVector::Constant(n_aps, power), noise};
}

bool nondecreasing(const std::vector<double>& t, double tol) {
  for (size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1] - tol) return false;
  }
  return true;
}

// Scalar two-user RS: brute force over the power simplex {p_c, p_1, p_2}.
double rs_grid_oracle(double g1, double g2, double P, double step) {
  const int n = static_cast<int>(std::lround(P / step));
  double best = 0.0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; a + b <= n; ++b) {
      const double pc = a * step, p1 = b * step, p2 = (n - a - b) * step;
      const double rc = std::min(std::log2(1 + g1 * pc / (g1 * (p1 + p2) + 1)),
                                 std::log2(1 + g2 * pc / (g2 * (p1 + p2) + 1)));
      const double r1 = std::log2(1 + g1 * p1 / (g1 * p2 + 1));
      const double r2 = std::log2(1 + g2 * p2 / (g2 * p1 + 1));
      best = std::max(best, rc + r1 + r2);
    }
  }
  return best;
}

ChannelSet random_channels(int nt, int k, int m, Rng& rng) {
  ChannelSet ch{CMatrix(nt, k), CMatrix(m, k), CMatrix(m, nt)};
  fill_complex_normal(ch.direct, rng);
  fill_complex_normal(ch.ris_user, rng);
  fill_complex_normal(ch.ap_ris, rng);
  return ch;
}

}  // namespace

TEST_CASE("qcqp: minimize a linear cost over a ball") {
  // min -x - y  s.t.  x^2 + y^2 <= 1  ->  (1, 1)/sqrt(2).
  QcqpProblem p;
  p.cost = (RVector(2) << -1.0, -1.0).finished();
  p.constraints.push_back({RMatrix::Identity(2, 2), RVector::Zero(2), -1.0});
  const auto r = solve_qcqp(p, RVector::Zero(2));
  CHECK(r.converged);
  CHECK(r.z[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  CHECK(r.objective == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));
  CHECK(p.constraints[0].value(r.z) < 0.0);
}

TEST_CASE("bfgs on a rosenbrock valley") {
  auto f = [](const RVector& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  BfgsOptions o;
  o.max_iters = 500;
  const auto r = bfgs_minimize(f, (RVector(2) << -1.2, 1.0).finished(), o);
  CHECK(r.f < 1e-8);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));

  const RVector g = fd_gradient(f, (RVector(2) << 0.5, 0.5).finished(), 1e-6);
  CHECK(g[0] == doctest::Approx(-400 * 0.5 * (0.5 - 0.25) - 2 * 0.5).epsilon(1e-6));
}

TEST_CASE("wmmse: single-user MRT") {
  const CMatrix h = (CMatrix(2, 1) << 1.0, 0.0).finished();
  const auto out = wmmse_precoder(h, RVector::Ones(1), setup(2), SchemeSpec::sdma());
  CHECK(out.wsr == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(out.precoder.P(0, 0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(out.precoder.P(1, 0)) < 1e-4);
}

TEST_CASE("wmmse matches the scalar grid oracle") {
  const CMatrix h = (CMatrix(1, 2) << 1.0, 0.5).finished();
  const auto out = wmmse_precoder(h, RVector::Ones(2), setup(1), SchemeSpec::rs1());
  CHECK(out.wsr >= rs_grid_oracle(1.0, 0.25, 1.0, 1e-3) - 1e-2);
}

TEST_CASE("wmmse traces are monotone and feasible for every scheme") {
  Rng rng(1);
  const std::vector<SchemeSpec> schemes{SchemeSpec::rs1(), SchemeSpec::sdma(), SchemeSpec::noma({1, 0}),
                                        SchemeSpec::hrs({{0}, {1}})};
  const auto tx = setup(2, 1.0, 0.1);
  for (int t = 0; t < 5; ++t) {
    CMatrix h(2, 2);
    fill_complex_normal(h, rng);
    RVector u(2);
    u << 0.3 + 0.1 * t, 0.7 - 0.1 * t;
    for (const auto& s : schemes) {
      const Precoder start = random_precoder(s, 2, tx, rng);
      const auto out = wmmse_precoder(h, u, tx, start);
      CHECK(nondecreasing(out.wsr_trace, 1e-8));
      CHECK(power_residual(out.precoder.P, 2, tx.ap_power) <= 1e-9);
      CHECK(out.wsr >= out.wsr_trace.front() - 1e-8);
      CHECK(out.wsr == doctest::Approx(weighted_sum(out.rates, u)).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-AP budgets are met with several APs") {
  Rng rng(2);
  const auto tx = TransmitSetup{2, (RVector(2) << 0.5, 2.0).finished(), 0.1};
  CMatrix h(4, 2);
  fill_complex_normal(h, rng);
  const auto out = wmmse_precoder(h, RVector::Constant(2, 0.5), tx, SchemeSpec::rs1());
  CHECK(power_residual(out.precoder.P, 2, tx.ap_power) <= 1e-9);
  const Precoder r = random_precoder(SchemeSpec::rs1(), 2, tx, rng);
  CHECK(std::abs(power_residual(r.P, 2, tx.ap_power)) < 1e-12);
}

TEST_CASE("ris co-phasing optimum") {
  // h_d = 1, h_r = 1, g = e^{j pi/3}: the reflected path lines up at theta = -pi/3.
  ChannelSet ch{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 1.0),
                CMatrix::Constant(1, 1, std::polar(1.0, kPi / 3))};
  const Precoder pre{SchemeSpec::sdma(), CMatrix::Constant(1, 1, 1.0)};
  const auto tx = setup(1);
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto ris0 = random_ris(RisArchitecture::single(1), 1, rng);
    const auto ris = optimize_ris(ch, pre, ris0, RVector::Ones(1), tx);
    CHECK(std::abs(effective_channels(ch, ris)(0, 0)) == doctest::Approx(2.0).epsilon(1e-3));
    const double theta = std::remainder(ris.params()[0] + kPi / 3, 2 * kPi);
    CHECK(std::abs(theta) < 1e-3);
    CHECK(validate(ris, 1e-9).pass);
  }
}

TEST_CASE("ris step never loses objective") {
  Rng rng(4);
  const auto tx = setup(2, 1.0, 0.5);
  for (const auto& arch : {RisArchitecture::single(4), RisArchitecture::group({2, 2}), RisArchitecture::fully(4)}) {
    for (int t = 0; t < 5; ++t) {
      const auto ch = random_channels(2, 2, 4, rng);
      const Precoder pre = random_precoder(SchemeSpec::rs1(), 2, tx, rng);
      const auto ris0 = random_ris(arch, 1, rng);
      const RVector u = RVector::Constant(2, 0.5);
      const auto ris = optimize_ris(ch, pre, ris0, u, tx);
      CHECK(ris_objective(ch, pre, ris, u, tx) >= ris_objective(ch, pre, ris0, u, tx));
      CHECK(validate(ris, 1e-9).pass);
    }
  }
}

TEST_CASE("ris step on a flat landscape returns the start") {
  Rng rng(5);
  auto ch = random_channels(2, 2, 4, rng);
  ch.ris_user.setZero();
  const auto tx = setup(2);
  const Precoder pre = random_precoder(SchemeSpec::sdma(), 2, tx, rng);
  const auto ris0 = random_ris(RisArchitecture::single(4), 1, rng);
  const auto ris = optimize_ris(ch, pre, ris0, RVector::Constant(2, 0.5), tx);
  CHECK(ris.params() == ris0.params());
}

TEST_CASE("alternating design") {
  Rng rng(6);
  const auto tx = setup(2, 1.0, 0.2);
  const auto ch = random_channels(2, 2, 4, rng);
  const RVector u = (RVector(2) << 0.6, 0.4).finished();
  OptimizerSettings s;
  s.restarts = 2;

  const auto a = alternating_optimize(ch, tx, u, SchemeSpec::rs1(), RisArchitecture::single(4), s, 42);
  const auto b = alternating_optimize(ch, tx, u, SchemeSpec::rs1(), RisArchitecture::single(4), s, 42);
  CHECK(a.wsr == b.wsr);
  CHECK(a.precoder.P == b.precoder.P);
  CHECK(a.ris->params() == b.ris->params());
  CHECK(nondecreasing(a.wsr_trace, 0.0));
  CHECK(a.wsr_trace.back() >= a.wsr_trace.front());
  CHECK(validate(*a.ris, 1e-9).pass);
  CHECK(power_residual(a.precoder.P, 2, tx.ap_power) <= 1e-9);
  CHECK(a.wsr == doctest::Approx(weighted_sum(a.rates, u)).epsilon(1e-9));

  // No RIS: same as the plain precoder design from the same start.
  ChannelSet no_ris{ch.direct, CMatrix(0, 2), CMatrix(0, 2)};
  const auto c = alternating_optimize(no_ris, tx, u, SchemeSpec::sdma(), RisArchitecture::single(4), s, 7);
  const auto d = alternating_optimize(ch, tx, u, SchemeSpec::sdma(), std::nullopt, s, 7);
  CHECK(c.wsr == d.wsr);
  CHECK_FALSE(c.ris.has_value());
  const Precoder start = random_precoder(SchemeSpec::sdma(), 2, tx, rng);
  const auto e = alternating_optimize_from(ch, tx, u, start, std::nullopt, s);
  const auto f = wmmse_precoder(ch.direct, u, tx, start, s);
  CHECK(e.wsr == f.wsr);
  CHECK(e.precoder.P == f.precoder.P);
}

TEST_CASE("embeddings keep every rate") {
  Rng rng(7);
  CMatrix h(2, 2);
  fill_complex_normal(h, rng);
  const auto tx = setup(2);
  const Precoder sd = random_precoder(SchemeSpec::sdma(), 2, tx, rng);
  const auto a = compute_rates(h, sd, 1.0);
  const auto b = compute_rates(h, embed_sdma_in_rs1(sd), 1.0);
  CHECK(a.private_rates == b.private_rates);

  Precoder no = random_precoder(SchemeSpec::noma({1, 0}), 2, tx, rng);
  const auto c = compute_rates(h, no, 1.0);
  const auto d = with_optimal_allocation(compute_rates(h, embed_noma_in_rs1(no), 1.0),
                                         (RVector(2) << 0.0, 1.0).finished());
  // The first-decoded user's stream becomes the common stream.
  CHECK(d.common_rate == doctest::Approx(c.private_rates[1]).epsilon(1e-12));
  CHECK(d.private_rates[0] == doctest::Approx(c.private_rates[0]).epsilon(1e-12));
  CHECK(d.private_rates[1] == 0.0);
}

TEST_CASE("ergodic evaluation") {
  Rng rng(8);
  const auto ch = random_channels(2, 2, 4, rng);
  const auto tx = setup(2, 1.0, 0.5);
  const Precoder pre = random_precoder(SchemeSpec::rs1(), 2, tx, rng);
  const auto ris = random_ris(RisArchitecture::single(4), 1, rng);
  const auto inst = compute_rates(effective_channels(ch, ris), pre, 0.5);
  const auto same = ergodic_rates(pre, ris, ch, CsiErrorModel{}, 7, 0.5, rng);
  CHECK((same.private_rates - inst.private_rates).norm() < 1e-12);
  CHECK(same.common_rate == doctest::Approx(inst.common_rate).epsilon(1e-12));

  const auto err = CsiErrorModel::from_quality(0.9, 0.5);
  Rng r1(9), r2(10);
  const auto a = ergodic_rates(pre, ris, ch, err, 2000, 0.5, r1);
  const auto b = ergodic_rates(pre, ris, ch, err, 4000, 0.5, r2);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(a.private_rates[k] - b.private_rates[k]) / b.private_rates[k] < 0.03);
  }
  CHECK(std::abs(a.common_rate - b.common_rate) / b.common_rate < 0.03);
}

TEST_CASE("invalid inputs") {
  const auto tx = setup(2);
  CHECK_THROWS(TransmitSetup{2, RVector::Ones(1), 0.0}.validate());
  OptimizerSettings s;
  s.restarts = 0;
  CHECK_THROWS(s.validate());
  CMatrix h = CMatrix::Ones(2, 3);
  CHECK_THROWS_AS(wmmse_precoder(h, RVector::Ones(3), tx, SchemeSpec::noma()), UnsupportedConfiguration);
}
