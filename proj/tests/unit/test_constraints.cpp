#include <gtest/gtest.h>

#include <cmath>

#include "support/generators.hpp"
#include "varcurve/constraints.hpp"
#include "varcurve/error.hpp"

using namespace varcurve;
using namespace varcurve::testing;

namespace {

std::vector<int> free_indices(const std::vector<bool>& mask) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> range(int a, int b) {
  std::vector<int> out;
  for (int i = a; i <= b; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST(FreeMask, Examples) {
  const auto k1 = ConstraintSet::clamped(1, {vec({0}), {}}, {vec({1}), {}});
  EXPECT_EQ(free_indices(free_mask(k1, 10)), range(1, 9));
  const auto k2 = ConstraintSet::clamped(2, {vec({0}), vec({0})}, {vec({1}), vec({0})});
  EXPECT_EQ(free_indices(free_mask(k2, 10)), range(2, 8));
  const auto knots = ConstraintSet::interpolation({{0.0, vec({0})}, {0.5, vec({1})}, {1.0, vec({0})}});
  EXPECT_EQ(free_indices(free_mask(knots, 10)), (std::vector<int>{1, 2, 3, 4, 6, 7, 8, 9}));
  EXPECT_EQ(free_indices(free_mask(ConstraintSet::periodic(), 10, DomainKind::circle)), range(0, 9));
}

TEST(FreeMask, OffGridKnotIsConfigError) {
  const auto knots = ConstraintSet::interpolation({{0.0, vec({0})}, {0.33, vec({1})}});
  try {
    free_mask(knots, 10);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("knot time not on grid"), std::string::npos);
  }
  EXPECT_EQ(knot_index(0.3, 10), 3);
  EXPECT_EQ(knot_index(1.0, 10, DomainKind::circle), 0);
}

TEST(ConstraintSet, ValidatesShape) {
  EXPECT_THROW(ConstraintSet::clamped(2, {vec({0}), {}}, {vec({1}), vec({0})}), ConfigError);
  EXPECT_THROW(ConstraintSet::clamped(1, {vec({0}), vec({1})}, {vec({1}), {}}), ConfigError);
  EXPECT_THROW(ConstraintSet::clamped(3, {vec({0}), {}}, {vec({1}), {}}), ConfigError);
  EXPECT_THROW(ConstraintSet::interpolation({{0.5, vec({0})}, {0.5, vec({1})}}), ConfigError);
  EXPECT_THROW(ConstraintSet::interpolation({{1.5, vec({0})}}), ConfigError);
  const auto off = ConstraintSet::clamped(1, {vec({1, 1, 0}), {}}, {vec({0, 1, 0}), {}});
  EXPECT_THROW(off.validate(*make_manifold("sphere:2")), ConfigError);
  EXPECT_FALSE(ConstraintSet::periodic().supports(DomainKind::interval));
}

TEST(Impose, EuclideanVelocityStep) {
  const auto c = ConstraintSet::clamped(2, {vec({0}), vec({1})}, {vec({1}), vec({0})});
  const auto x0 = DiscreteCurve::constant(make_manifold("euclidean:1"), DomainKind::interval, 100, vec({0.5}));
  const DiscreteCurve x = impose(c, x0);
  EXPECT_EQ(x.sample(0)[0], 0.0);
  EXPECT_NEAR(x.sample(1)[0], 0.01, 1e-16);
  EXPECT_EQ(x.sample(99)[0], 1.0);
  EXPECT_EQ(x.sample(100)[0], 1.0);
  EXPECT_EQ(x.sample(50)[0], 0.5);
}

TEST(Impose, SphereVelocityStep) {
  const auto c = ConstraintSet::clamped(2, {vec({1, 0, 0}), vec({0, kPi, 0})}, {vec({0, 0, 1}), vec({0, 0, 0})});
  const auto x0 = DiscreteCurve::constant(make_manifold("sphere:2"), DomainKind::interval, 100, vec({1, 0, 0}));
  const DiscreteCurve x = impose(c, x0);
  EXPECT_LT((x.sample(1) - vec({std::cos(0.01 * kPi), std::sin(0.01 * kPi), 0})).norm(), 1e-15);
}

TEST(Impose, OversizedVelocityIsConfigError) {
  const auto c = ConstraintSet::clamped(2, {vec({1, 0, 0}), vec({0, 400, 0})}, {vec({0, 1, 0}), vec({0, 0, 0})});
  const auto x0 = DiscreteCurve::constant(make_manifold("sphere:2"), DomainKind::interval, 100, vec({1, 0, 0}));
  EXPECT_THROW(impose(c, x0), ConfigError);
}

TEST(ImposeProperty, IdempotentAndOnlyTouchesFixedSamples) {
  std::mt19937_64 rng(73);
  for (const auto& id : manifold_ids()) {
    const auto m = make_manifold(id);
    const Vec p = m->random_point(rng), q = m->random_point(rng), r = m->random_point(rng);
    const std::vector<ConstraintSet> sets{
        ConstraintSet::clamped(1, {p, {}}, {q, {}}),
        ConstraintSet::clamped(2, {p, m->random_tangent(p, rng)}, {q, m->random_tangent(q, rng)}),
        ConstraintSet::interpolation({{0.0, p}, {0.25, r}, {1.0, q}})};
    for (const auto& c : sets) {
      const auto x = smooth_curve(m, DomainKind::interval, 20, rng);
      const DiscreteCurve once = impose(c, x);
      const DiscreteCurve twice = impose(c, once);
      EXPECT_TRUE(once.samples() == twice.samples()) << id;
      const auto mask = free_mask(c, 20);
      for (int j = 0; j <= 20; ++j) {
        if (mask[static_cast<std::size_t>(j)]) {
          EXPECT_TRUE(once.sample(j) == x.sample(j)) << id << ' ' << j;
        }
      }
    }
  }
}

TEST(Seed, EuclideanStraightLine) {
  const auto c = ConstraintSet::clamped(1, {vec({0, 0}), {}}, {vec({2, 1}), {}});
  const DiscreteCurve x = seed(c, make_manifold("euclidean:2"), 10);
  for (int j = 0; j <= 10; ++j) EXPECT_LT((x.sample(j) - vec({0.2 * j, 0.1 * j})).norm(), 1e-14) << j;
}

TEST(Seed, CircleWindingHintLiftsTheLine) {
  const auto c = ConstraintSet::interpolation({{0.0, vec({0})}, {1.0, vec({kPi / 2})}});
  const auto m = make_manifold("circle");
  for (int w = -1; w <= 1; ++w) {
    const DiscreteCurve x = seed(c, m, 40, SeedHint{{w}, {}});
    for (int j = 0; j <= 40; ++j) {
      const double expected = Torus::wrap((kPi / 2 + 2 * kPi * w) * j / 40.0);
      EXPECT_NEAR(std::abs(Torus::wrap_symmetric(x.sample(j)[0] - expected)), 0.0, 1e-13) << w << ' ' << j;
    }
    EXPECT_EQ(winding_numbers(x), std::vector<int>{w});
  }
}

TEST(Seed, SphereWrappedGreatCircle) {
  const auto c = ConstraintSet::interpolation({{0.0, vec({1, 0, 0})}, {1.0, vec({0, 1, 0})}});
  const DiscreteCurve x = seed(c, make_manifold("sphere:2"), 200, SeedHint{{1}, {}});
  EXPECT_NEAR(length(x), kPi / 2 + 2 * kPi, 1e-10);
  for (int j = 0; j <= 200; ++j) EXPECT_NEAR(x.sample(j)[2], 0.0, 1e-14);
}

TEST(Seed, AntipodalKnotsNeedAHint) {
  const auto c = ConstraintSet::interpolation({{0.0, vec({1, 0, 0})}, {1.0, vec({-1, 0, 0})}});
  EXPECT_THROW(seed(c, make_manifold("sphere:2"), 20), ConfigError);
  const DiscreteCurve x = seed(c, make_manifold("sphere:2"), 20, SeedHint{{}, vec({0, 0, 1})});
  EXPECT_NEAR(length(x), kPi, 1e-12);
  EXPECT_NEAR(x.sample(10)[2], 1.0, 1e-12);
}

TEST(SeedProperty, FeasibleAndWindingMatchesHint) {
  std::mt19937_64 rng(79);
  for (const auto& id : manifold_ids()) {
    const auto m = make_manifold(id);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec p = m->random_point(rng);
      const Vec q = m->exp(p, tangent_of_norm(*m, p, rng, uniform(rng, 0.1, 1.0)));
      const Vec r = m->exp(q, tangent_of_norm(*m, q, rng, uniform(rng, 0.1, 1.0)));
      const std::vector<ConstraintSet> sets{
          ConstraintSet::clamped(1, {p, {}}, {q, {}}),
          ConstraintSet::clamped(2, {p, m->random_tangent(p, rng, 0.5)}, {q, m->random_tangent(q, rng, 0.5)}),
          ConstraintSet::interpolation({{0.2, p}, {0.6, q}, {0.8, r}})};
      for (const auto& c : sets) {
        SeedHint hint;
        if (m->kind() == ManifoldKind::torus) {
          for (int i = 0; i < m->dim(); ++i) hint.winding.push_back(static_cast<int>(rng() % 5) - 2);
        }
        const DiscreteCurve x = seed(c, m, 40, hint);
        ASSERT_TRUE(impose(c, x).samples() == x.samples()) << id;
        for (int j = 0; j <= 40; ++j) ASSERT_LT(m->constraint_residual(x.sample(j)), 1e-12);
        if (m->kind() == ManifoldKind::torus) {
          ASSERT_EQ(winding_numbers(x), hint.winding) << id;
        }
      }
    }
  }
}

TEST(SeedProperty, PeriodicLoopsWindAsHinted) {
  const auto m = make_manifold("torus:2");
  for (int a = -2; a <= 2; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const DiscreteCurve x = seed(ConstraintSet::periodic(), m, 32, SeedHint{{a, b}, {}}, DomainKind::circle);
      EXPECT_EQ(winding_numbers(x), (std::vector<int>{a, b}));
    }
  }
}
