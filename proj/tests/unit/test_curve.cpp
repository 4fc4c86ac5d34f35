#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "support/generators.hpp"
#include "varcurve/curve.hpp"
#include "varcurve/curve_io.hpp"
#include "varcurve/diagnostics.hpp"
#include "varcurve/error.hpp"

using namespace varcurve;
using namespace varcurve::testing;

namespace {

DiscreteCurve quarter_circle(int n) {
  return DiscreteCurve::sample(make_manifold("sphere:2"), DomainKind::interval, n, [](double t) {
    return vec({std::cos(kPi * t / 2), std::sin(kPi * t / 2), 0});
  });
}

double max_norm(const TangentField& f, bool interior_only) {
  double out = 0.0;
  const int first = interior_only ? 1 : 0;
  const int last = interior_only ? f.size() - 1 : f.size();
  for (int j = first; j < last; ++j) out = std::max(out, f[j].norm());
  return out;
}

TangentField euclidean_field(int n, const std::function<double(double)>& fn) {
  const auto m = make_manifold("euclidean:2");
  DiscreteCurve base = DiscreteCurve::constant(m, DomainKind::interval, n, vec({0, 0}));
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, n + 1);
  for (int j = 0; j <= n; ++j) v(0, j) = fn(static_cast<double>(j) / n);
  return TangentField(base, v);
}

}  // namespace

TEST(Curve, RejectsTooFewSamplesAndOffManifoldPoints) {
  const auto s = make_manifold("sphere:2");
  EXPECT_THROW(DiscreteCurve(s, DomainKind::interval, Eigen::MatrixXd::Zero(3, 4)), UsageError);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(3, 6);
  pts.row(0).setOnes();
  pts(0, 2) = 1.1;
  EXPECT_THROW(DiscreteCurve(s, DomainKind::interval, pts), UsageError);
}

TEST(Curve, CircleDomainIndexesModN) {
  const auto c = DiscreteCurve::constant(make_manifold("euclidean:2"), DomainKind::circle, 8, vec({1, 2}));
  EXPECT_EQ(c.sample_count(), 8);
  EXPECT_EQ(c.index(-1), 7);
  EXPECT_EQ(c.index(8), 0);
  EXPECT_EQ(c.segment_count(), 8);
}

TEST(Velocity, ConstantCurveIsZero) {
  std::mt19937_64 rng(3);
  for (const auto& id : manifold_ids()) {
    const auto m = make_manifold(id);
    const auto x = DiscreteCurve::constant(m, DomainKind::interval, 20, m->random_point(rng));
    EXPECT_EQ(max_norm(velocity(x), false), 0.0) << id;
  }
}

TEST(Velocity, ExactOnAffineData) {
  const auto x = DiscreteCurve::sample(make_manifold("euclidean:2"), DomainKind::interval, 17,
                                       [](double t) { return vec({t, 0}); });
  const TangentField v = velocity(x);
  for (int j = 0; j < v.size(); ++j) EXPECT_LT((v[j] - vec({1, 0})).norm(), 1e-13) << j;
}

TEST(Velocity, GreatCircleSpeed) {
  const TangentField v = velocity(quarter_circle(100));
  for (int j = 0; j < v.size(); ++j) EXPECT_NEAR(v[j].norm(), kPi / 2, 1e-3) << j;
}

TEST(Accel, QuadraticIsExact) {
  const auto x = DiscreteCurve::sample(make_manifold("euclidean:2"), DomainKind::interval, 23,
                                       [](double t) { return vec({t * t, 0}); });
  const TangentField a = covariant_accel(x);
  for (int j = 1; j < a.size() - 1; ++j) EXPECT_LT((a[j] - vec({2, 0})).norm(), 1e-10) << j;
}

TEST(Accel, CircleWrapIsZero) {
  const auto x = DiscreteCurve::sample(make_manifold("circle"), DomainKind::circle, 40,
                                       [](double t) { return vec({2 * kPi * t}); });
  EXPECT_LT(max_norm(covariant_accel(x), false), 1e-9);
  EXPECT_LT(max_norm(covariant_accel(DiscreteCurve::sample(make_manifold("circle"), DomainKind::interval, 40,
                                                           [](double t) { return vec({2 * kPi * t}); })),
                     true),
            1e-9);
}

TEST(Accel, GreatCircleIsNearlyGeodesic) {
  EXPECT_LE(max_norm(covariant_accel(quarter_circle(100)), true), 2e-2 * std::pow(kPi / 2, 2));
}

TEST(Accel, LatitudeCircleConvergesAtSecondOrder) {
  // Parallel at polar angle th traversed at angular rate w: |D_t x'| = w^2 sin(th) |cos(th)|.
  const double th = 0.7, w = 3.0;
  const double exact = w * w * std::sin(th) * std::cos(th);
  std::vector<double> errs;
  for (int n : {25, 50, 100, 200}) {
    const auto x = DiscreteCurve::sample(make_manifold("sphere:2"), DomainKind::interval, n, [&](double t) {
      return vec({std::sin(th) * std::cos(w * t), std::sin(th) * std::sin(w * t), std::cos(th)});
    });
    const TangentField a = covariant_accel(x);
    double err = 0.0;
    for (int j = 1; j < a.size() - 1; ++j) err = std::max(err, std::abs(a[j].norm() - exact));
    errs.push_back(err);
  }
  EXPECT_LE(errs.back(), 1e-3 * exact);
  for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_GE(std::log2(errs[i - 1] / errs[i]), 1.8) << i;
}

TEST(Accel, DegenerateSpacingCarriesIndex) {
  const auto s = make_manifold("sphere:2");
  Eigen::MatrixXd pts(3, 6);
  for (int j = 0; j < 6; ++j) pts.col(j) = vec({1, 0, 0});
  pts.col(3) = vec({-1, 0, 0});
  const DiscreteCurve x(s, DomainKind::interval, pts);
  try {
    covariant_accel(x);
    FAIL() << "expected DegenerateCurveError";
  } catch (const DegenerateCurveError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(Sobolev, Examples) {
  EXPECT_EQ(sobolev_norm_sq(euclidean_field(50, [](double) { return 0.0; }), 2), 0.0);
  EXPECT_NEAR(sobolev_norm_sq(euclidean_field(50, [](double) { return 1.0; }), 0), 1.0, 1e-14);
  EXPECT_NEAR(sobolev_norm_sq(euclidean_field(100, [](double t) { return std::sin(kPi * t); }), 0), 0.5, 1e-3);
  // k = 1 adds |f'|^2 = pi^2 cos^2 whose integral is pi^2 / 2.
  EXPECT_NEAR(sobolev_norm_sq(euclidean_field(200, [](double t) { return std::sin(kPi * t); }), 1),
              0.5 + kPi * kPi / 2, 1e-2);
}

TEST(Sobolev, MonotoneUnderDomination) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = smooth_curve(make_manifold("sphere:2"), DomainKind::interval, 30, rng);
    const Eigen::MatrixXd f = random_field(x, rng);
    Eigen::MatrixXd g = f;
    for (int j = 0; j < g.cols(); ++j) g.col(j) *= uniform(rng, 0.0, 1.0);
    EXPECT_LE(sobolev_norm_sq(TangentField(x, g), 0), sobolev_norm_sq(TangentField(x, f), 0) + 1e-15);
  }
}

TEST(SupNorm, Examples) {
  EXPECT_EQ(sup_norm(euclidean_field(50, [](double) { return 0.0; }), 1), 0.0);
  EXPECT_NEAR(sup_norm(euclidean_field(50, [](double) { return 1.0; }), 0), 1.0, 1e-15);
  EXPECT_NEAR(sup_norm(euclidean_field(100, [](double t) { return std::sin(kPi * t); }), 0), 1.0, 1e-3);
}

TEST(Length, Examples) {
  EXPECT_EQ(length(DiscreteCurve::constant(make_manifold("sphere:2"), DomainKind::interval, 10, vec({0, 0, 1}))), 0.0);
  EXPECT_NEAR(length(quarter_circle(100)), kPi / 2, 1e-4);
  for (int w = 1; w <= 3; ++w) {
    const auto x = DiscreteCurve::sample(make_manifold("circle"), DomainKind::interval, 50,
                                         [w](double t) { return vec({2 * kPi * w * t}); });
    EXPECT_NEAR(length(x), 2 * kPi * w, 1e-12) << w;
  }
}

TEST(LengthProperty, AdditiveAndAboveChord) {
  std::mt19937_64 rng(31);
  for (const auto& id : manifold_ids()) {
    const auto m = make_manifold(id);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = smooth_curve(m, DomainKind::interval, 40, rng);
      EXPECT_GE(length(x) + 1e-12, m->dist(x.sample(0), x.sample(40))) << id;
      const auto head = DiscreteCurve(x.manifold_ptr(), DomainKind::interval, x.samples().leftCols(21));
      const auto tail = DiscreteCurve(x.manifold_ptr(), DomainKind::interval, x.samples().rightCols(21));
      EXPECT_NEAR(length(head) + length(tail), length(x), 1e-12) << id;
      EXPECT_LE(length(x) * length(x), speed_norm_sq(x) * (1 + 1e-12)) << id;
    }
  }
}

TEST(Holder, RandomCurvesSatisfyDiscreteBound) {
  std::mt19937_64 rng(37);
  for (const auto& id : manifold_ids()) {
    const auto m = make_manifold(id);
    for (auto domain : {DomainKind::interval, DomainKind::circle}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto x = smooth_curve(m, domain, 60, rng, 0.5, 1e-2);
        const auto check = equicontinuity(x, 100, static_cast<std::uint64_t>(trial + 1));
        EXPECT_EQ(check.pairs, 100);
        EXPECT_TRUE(check.holds()) << id << " worst " << check.worst_ratio;
        EXPECT_LE(check.worst_ratio, 1.0 + 1e-12);
      }
    }
  }
}

TEST(Winding, TorusOnlyAndExactOnLiftedLines) {
  EXPECT_THROW(winding_numbers(quarter_circle(20)), UsageError);
  for (int w = -2; w <= 2; ++w) {
    const auto x = DiscreteCurve::sample(make_manifold("circle"), DomainKind::interval, 40,
                                         [w](double t) { return vec({(kPi / 2 + 2 * kPi * w) * t}); });
    EXPECT_EQ(winding_numbers(x), std::vector<int>{w});
    const auto loop = DiscreteCurve::sample(make_manifold("torus:2"), DomainKind::circle, 40,
                                            [w](double t) { return vec({2 * kPi * w * t, 0.3}); });
    EXPECT_EQ(winding_numbers(loop), (std::vector<int>{w, 0}));
  }
}

TEST(Distances, SupAndH2VanishOnlyOnEqualCurves) {
  const auto x = quarter_circle(30);
  EXPECT_EQ(sup_distance(x, x), 0.0);
  EXPECT_EQ(h2_distance(x, x), 0.0);
  const auto y = DiscreteCurve::sample(x.manifold_ptr(), DomainKind::interval, 30, [](double t) {
    return vec({std::cos(kPi * t / 2), 0, std::sin(kPi * t / 2)});
  });
  EXPECT_GT(sup_distance(x, y), 1.0);
  EXPECT_GT(h2_distance(x, y), 1.0);
}

TEST(CurveIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(41);
  for (const auto& id : manifold_ids()) {
    for (auto domain : {DomainKind::interval, DomainKind::circle}) {
      const auto x = smooth_curve(make_manifold(id), domain, 13, rng);
      const DiscreteCurve y = parse_curve(format_curve(x));
      EXPECT_EQ(y.manifold().id(), x.manifold().id());
      EXPECT_EQ(y.domain(), x.domain());
      EXPECT_EQ(y.grid_size(), x.grid_size());
      EXPECT_TRUE(y.samples() == x.samples()) << id;
      EXPECT_EQ(format_curve(y), format_curve(x));
    }
  }
}

TEST(CurveIo, FileRoundTripAndHeader) {
  const auto x = quarter_circle(10);
  const auto path = std::filesystem::temp_directory_path() / "varcurve_io_test.csv";
  write_curve(path, x);
  EXPECT_TRUE(read_curve(path).samples() == x.samples());
  std::filesystem::remove(path);
  const std::string text = format_curve(x);
  EXPECT_EQ(text.substr(0, text.find('\n')), R"({"manifold":"sphere:2","domain_kind":"interval","n_samples":11})");
}

TEST(CurveIo, RejectsMalformedInput) {
  EXPECT_THROW(parse_curve("not json\n"), ConfigError);
  EXPECT_THROW(parse_curve(R"({"manifold":"sphere:2","domain_kind":"interval","n_samples":6})"
                           "\nt,x0,x1,x2\n0,1,0,0\n"),
               ConfigError);
  EXPECT_THROW(parse_double("1.5x"), ConfigError);
  EXPECT_EQ(parse_double(format_double(0.1)), 0.1);
}
