#pragma once

#include "model.hpp"
#include "point.hpp"

#include <cstdint>
#include <random>

namespace hl {

// Random stream for one sample. Its state depends only on (seed, index), so
// estimates do not depend on how samples are distributed over threads.
class SampleStream {
public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  double uniform();      // (0, 1)
  double normal();
  double gamma(double shape);
  double beta(double a, double b);
  Point direction(int dim); // uniform on S^{d-1}
  Point in_ball(const Ball &ball);

  std::mt19937_64 &engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Van der Corput radical inverse of i in the given prime base.
double radical_inverse(int base, std::uint64_t i);

// i-th point of a Halton sequence mapped into the unit sphere S^{d-1}
// (bases start at the `first_prime`-th prime) and into a ball.
Point halton_direction(int dim, std::uint64_t i, int first_prime = 0);
Point halton_in_ball(const Ball &ball, std::uint64_t i);

// Exit position from the ball centred at the current point. Stable: radius
// r / sqrt(U), U ~ Beta(alpha/2, 1 - alpha/2), uniform direction. Brownian:
// uniform on the sphere.
Point sample_centered_exit(const ProcessModel &model, const Point &center, double radius,
                           SampleStream &rng);

struct ExitSample {
  Point z;
  int steps = 0;
};

inline constexpr int kMaxExitSteps = 100000;

// Exact exit position from `ball` started at x in the ball. Off-centre stable
// exits chain centred exits from inscribed tangent balls (strong Markov
// property). Off-centre Brownian exits sample the Poisson kernel directly.
ExitSample sample_exit(const ProcessModel &model, const Ball &ball, const Point &x,
                       SampleStream &rng);

} // namespace hl
