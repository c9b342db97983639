#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fqmci/circuit.hpp"
#include "fqmci/distribution.hpp"
#include "fqmci/simulator.hpp"
#include "test_util.hpp"

using namespace fqmci;

namespace {

constexpr double kPi = std::numbers::pi;

double ancilla_prob(const Eigen::VectorXcd& state, int ancilla) {
  const std::int64_t bit = std::int64_t{1} << ancilla;
  double p = 0.0;
  for (std::int64_t i = 0; i < state.size(); ++i)
    if (i & bit) p += std::norm(state[i]);
  return p;
}

DiscreteDistribution point_mass(double x0) {
  Eigen::ArrayXd p(2);
  p << 1.0, 0.0;
  return DiscreteDistribution({make_grid(x0, 1.0, 1)}, p);
}

// Direct phase sums over the outcome table; the analytic counterpart of the
// rotation-bank ancilla probability.
double cos_sum(const DiscreteDistribution& dist, int axis, double angle_n_omega) {
  return brute_force_expectation(
      dist, {axis}, {[&](double x) { return std::cos(angle_n_omega * x); }});
}

double sin_sum(const DiscreteDistribution& dist, int axis, double angle_n_omega) {
  return brute_force_expectation(
      dist, {axis}, {[&](double x) { return std::sin(angle_n_omega * x); }});
}

}  // namespace

TEST_CASE("ry convention") {
  Circuit c;
  c.width = 1;
  Gate g;
  g.kind = Gate::Kind::Ry;
  g.target = 0;
  g.angle = 2.0 * kPi / 5.0;
  c.gates.push_back(g);
  auto state = run(c);
  CHECK(state[0].real() == doctest::Approx(std::cos(kPi / 5.0)).epsilon(1e-14));
  CHECK(state[1].real() == doctest::Approx(std::sin(kPi / 5.0)).epsilon(1e-14));
}

TEST_CASE("state preparation loads the masses") {
  auto ref = load_distribution(test::data_path("reference16.dist"));
  auto state = run(build_state_prep(ref));
  REQUIRE(state.size() == 16);
  for (int v = 0; v < 16; ++v) {
    CHECK(std::norm(state[v]) == doctest::Approx(ref.probs()[v]).epsilon(1e-12));
    CHECK(state[v].imag() == 0.0);
    CHECK(state[v].real() >= 0.0);
  }

  auto e0 = run(build_state_prep(point_mass(3.0)));
  CHECK(std::abs(e0[0] - 1.0) < 1e-14);
  CHECK(std::abs(e0[1]) < 1e-14);

  Eigen::ArrayXd half(2);
  half << 0.5, 0.5;
  auto coin = run(build_state_prep(DiscreteDistribution({make_grid(0, 1, 1)}, half)));
  CHECK(coin[0].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(coin[1].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("state preparation lays axes out little-endian, axis 0 low") {
  Eigen::ArrayXd p(8);
  p << 0.05, 0.10, 0.15, 0.20, 0.08, 0.12, 0.14, 0.16;  // row-major 2x4
  DiscreteDistribution joint({make_grid(0, 1, 1), make_grid(0, 1, 2)}, p);
  auto state = run(build_state_prep(joint));
  REQUIRE(state.size() == 8);
  for (std::int64_t v0 = 0; v0 < 2; ++v0)
    for (std::int64_t v1 = 0; v1 < 4; ++v1) {
      std::int64_t basis = v0 | (v1 << 1);
      CHECK(std::norm(state[basis]) ==
            doctest::Approx(joint.prob({v0, v1})).epsilon(1e-12));
    }
}

TEST_CASE("rotation bank on a point mass") {
  auto dist = point_mass(1.5);
  Circuit prep = build_state_prep(dist);
  for (double omega : {0.3, 1.0, 2.2}) {
    for (int n : {1, 2, 5}) {
      double phi = n * omega * 1.5;
      double p_cos = good_state_probability(build_A(prep, dist, 0, 0.0, n, omega));
      CHECK(p_cos == doctest::Approx(std::sin(phi / 2) * std::sin(phi / 2))
                         .epsilon(1e-12));
      double p_sin =
          good_state_probability(build_A(prep, dist, 0, kPi / 2.0, n, omega));
      double shifted = std::sin((phi - kPi / 2.0) / 2.0);
      CHECK(p_sin == doctest::Approx(shifted * shifted).epsilon(1e-12));
    }
  }
}

TEST_CASE("rotation bank realizes the trig sums") {
  ShotSampler rng(41, 0);
  for (int trial = 0; trial < 50; ++trial) {
    auto dist = test::random_distribution(rng, 1, 4);
    Circuit prep = build_state_prep(dist);
    int n = 1 + static_cast<int>(rng.next_u64() % 10);
    double omega = 0.05 + 3.0 * rng.next_double();

    double p0 = good_state_probability(build_A(prep, dist, 0, 0.0, n, omega));
    CHECK(1.0 - 2.0 * p0 ==
          doctest::Approx(cos_sum(dist, 0, n * omega)).epsilon(1e-10));

    double p1 = good_state_probability(build_A(prep, dist, 0, kPi / 2.0, n, omega));
    CHECK(1.0 - 2.0 * p1 ==
          doctest::Approx(sin_sum(dist, 0, n * omega)).epsilon(1e-10));
  }
}

TEST_CASE("rotation bank on the reference distribution, sine harmonic 2") {
  auto ref = load_distribution(test::data_path("reference16.dist"));
  Circuit prep = build_state_prep(ref);
  double omega = 2.0 * kPi / 30.0;
  double p = good_state_probability(build_A(prep, ref, 0, kPi / 2.0, 2, omega));
  CHECK(p == doctest::Approx(0.5 * (1.0 - sin_sum(ref, 0, 2.0 * omega)))
                 .epsilon(1e-10));
}

TEST_CASE("rotation bank on a joint acts through the marginal") {
  ShotSampler rng(43, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto joint = test::random_distribution(rng, 2, 3);
    for (int axis = 0; axis < 2; ++axis) {
      auto marg = marginal(joint, axis);
      int n = 1 + static_cast<int>(rng.next_u64() % 5);
      double omega = 0.1 + rng.next_double();
      double via_joint = good_state_probability(
          build_A(build_state_prep(joint), joint, axis, 0.4, n, omega));
      double via_marginal = good_state_probability(
          build_A(build_state_prep(marg), marg, 0, 0.4, n, omega));
      CHECK(via_joint == doctest::Approx(via_marginal).epsilon(1e-10));
    }
  }
}

TEST_CASE("two-axis rotation bank phases") {
  // Point mass at (x0, y0) = (2, 3).
  Eigen::ArrayXd p(4);
  p << 1.0, 0.0, 0.0, 0.0;
  DiscreteDistribution dist({make_grid(2, 1, 1), make_grid(3, 1, 1)}, p);
  Circuit prep = build_state_prep(dist);

  double w1 = 0.7, w2 = 0.4;
  for (int n : {1, 3}) {
    for (int m : {-2, -1, 1, 2}) {
      double phi = n * w1 * 2.0 + m * w2 * 3.0;
      double prob = good_state_probability(
          build_A_bivariate(prep, dist, 0, 1, 0.0, n, m, w1, w2));
      CHECK(prob == doctest::Approx(std::sin(phi / 2) * std::sin(phi / 2))
                        .epsilon(1e-12));
    }
  }
}

TEST_CASE("two-axis rotation bank matches brute-force phase sums") {
  ShotSampler rng(47, 0);
  for (int trial = 0; trial < 25; ++trial) {
    auto dist = test::random_distribution(rng, 2, 2);
    Circuit prep = build_state_prep(dist);
    int n = 1 + static_cast<int>(rng.next_u64() % 4);
    int m = 1 + static_cast<int>(rng.next_u64() % 4);
    if (rng.next_u64() & 1) m = -m;
    double w1 = 0.1 + rng.next_double(), w2 = 0.1 + rng.next_double();

    double expect_cos = brute_force_expectation(
        dist, {0, 1}, {[&](double) { return 1.0; }, [&](double) { return 1.0; }});
    (void)expect_cos;

    // E[cos(n w1 X + m w2 Y)] and E[sin(...)] via a complex phase table.
    std::complex<double> phase(0.0, 0.0);
    for (std::int64_t v0 = 0; v0 < dist.axis(0).size(); ++v0)
      for (std::int64_t v1 = 0; v1 < dist.axis(1).size(); ++v1) {
        double ang = n * w1 * dist.axis(0).point(v0) + m * w2 * dist.axis(1).point(v1);
        phase += dist.prob({v0, v1}) * std::complex<double>(std::cos(ang), std::sin(ang));
      }

    double p_cos = good_state_probability(
        build_A_bivariate(prep, dist, 0, 1, 0.0, n, m, w1, w2));
    double p_sin = good_state_probability(
        build_A_bivariate(prep, dist, 0, 1, kPi / 2.0, n, m, w1, w2));
    CHECK(1.0 - 2.0 * p_cos == doctest::Approx(phase.real()).epsilon(1e-10));
    CHECK(1.0 - 2.0 * p_sin == doctest::Approx(phase.imag()).epsilon(1e-10));
  }
}

TEST_CASE("rotation bank argument validation") {
  auto dist = point_mass(0.0);
  Circuit prep = build_state_prep(dist);
  CHECK_THROWS_AS(build_A(prep, dist, 0, 0.0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_A(prep, dist, 0, 0.0, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_A(prep, dist, 1, 0.0, 1, 1.0), std::invalid_argument);

  Eigen::ArrayXd p(4);
  p << 0.25, 0.25, 0.25, 0.25;
  DiscreteDistribution joint({make_grid(0, 1, 1), make_grid(0, 1, 1)}, p);
  Circuit jprep = build_state_prep(joint);
  CHECK_THROWS_AS(build_A_bivariate(jprep, joint, 0, 0, 0.0, 1, 1, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_A_bivariate(jprep, joint, 0, 1, 0.0, 1, 0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_A_bivariate(prep, joint, 0, 1, 0.0, 1, 1, 1.0, 1.0),
                  std::invalid_argument);  // prep width mismatch
}

TEST_CASE("amplification rotates by exactly 2 theta per step") {
  // Point mass at x = 1 with omega = pi/3: theta_a = pi/6, so one step lands
  // on certainty.
  auto dist = point_mass(1.0);
  Circuit prep = build_state_prep(dist);
  Circuit a = build_A(prep, dist, 0, 0.0, 1, kPi / 3.0);
  CHECK(good_state_probability(a) == doctest::Approx(0.25).epsilon(1e-12));

  Circuit q = build_grover_iterate(a);
  auto state = run(a);
  apply_circuit(q, state);
  CHECK(ancilla_prob(state, a.ancilla) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("amplification matches the closed-form angle law") {
  auto ref = load_distribution(test::data_path("reference16.dist"));
  Circuit prep = build_state_prep(ref);
  Circuit a = build_A(prep, ref, 0, 0.0, 1, 2.0 * kPi / 30.0);
  double theta = amplitude_angle(a);

  Circuit q = build_grover_iterate(a);
  auto state = run(a);
  for (int m = 1; m <= 8; ++m) {
    apply_circuit(q, state);
    double want = std::sin((2 * m + 1) * theta);
    CHECK(ancilla_prob(state, a.ancilla) ==
          doctest::Approx(want * want).epsilon(1e-9));
  }
}

TEST_CASE("amplification law on randomized circuits up to depth 64") {
  ShotSampler rng(53, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto dist = test::random_distribution(rng, 1, 3);
    Circuit prep = build_state_prep(dist);
    int n = 1 + static_cast<int>(rng.next_u64() % 6);
    double omega = 0.05 + 2.0 * rng.next_double();
    double beta = (rng.next_u64() & 1) ? kPi / 2.0 : 0.0;
    Circuit a = build_A(prep, dist, 0, beta, n, omega);
    double theta = amplitude_angle(a);

    Circuit q = build_grover_iterate(a);
    auto state = run(a);
    int depth = 1 + static_cast<int>(rng.next_u64() % 64);
    for (int m = 1; m <= depth; ++m) apply_circuit(q, state);
    double want = std::sin((2 * depth + 1) * theta);
    CHECK(ancilla_prob(state, a.ancilla) ==
          doctest::Approx(want * want).epsilon(1e-9));
  }
}

TEST_CASE("circuits undo exactly") {
  ShotSampler rng(59, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto dist = test::random_distribution(rng, 1, 3);
    Circuit prep = build_state_prep(dist);
    Circuit a = build_A(prep, dist, 0, 1.1, 2, 0.8);
    Circuit q = build_grover_iterate(a);

    for (const Circuit* c : {&prep, &a, &q}) {
      std::int64_t dim = std::int64_t{1} << c->width;
      std::int64_t basis =
          static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(dim));
      Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
      state[basis] = 1.0;
      apply_circuit(*c, state);
      apply_circuit(inverse_circuit(*c), state);
      CHECK(std::abs(state[basis] - 1.0) < 1e-10);
      state[basis] -= 1.0;
      CHECK(state.norm() < 1e-10);
    }
  }
}

TEST_CASE("simulator rejects malformed circuits") {
  Circuit empty;
  CHECK_THROWS_AS(run(empty), std::invalid_argument);

  Circuit wide;
  wide.width = kMaxSimQubits + 1;
  CHECK_THROWS_AS(run(wide), std::invalid_argument);

  Circuit one;
  one.width = 1;
  Eigen::VectorXcd wrong = Eigen::VectorXcd::Zero(4);
  CHECK_THROWS_AS(apply_circuit(one, wrong), std::invalid_argument);
  CHECK_THROWS_AS(good_state_probability(one), std::invalid_argument);

  Gate bad;
  bad.kind = Gate::Kind::Ry;
  bad.target = 3;
  one.gates.push_back(bad);
  CHECK_THROWS_AS(run(one), std::invalid_argument);
}

TEST_CASE("gate dump is readable") {
  auto dist = point_mass(1.0);
  Circuit a = build_A(build_state_prep(dist), dist, 0, 0.5, 2, 1.25);
  std::string text = dump_circuit(a);
  CHECK(text.find("circuit width=2 ancilla=1") != std::string::npos);
  CHECK(text.find("state_prep qubits=[0,1) dim=2") != std::string::npos);
  CHECK(text.find("ry target=1 angle=2") != std::string::npos);
  CHECK(text.find("cry control=0 target=1 angle=2.5") != std::string::npos);

  std::string qtext = dump_circuit(build_grover_iterate(a));
  CHECK(qtext.find("phase_flip target=1") != std::string::npos);
  CHECK(qtext.find("inverse {") != std::string::npos);
  CHECK(qtext.find("reflect_zero qubits=[0,2)") != std::string::npos);
}
