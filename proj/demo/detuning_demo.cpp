// Optimal squeezing of a 100-atom ensemble (S = 50) against laser detuning,
// weakest and strongest dispersive shift. Prints a small table.

#include <cstdio>

#include "cavsq/cavsq.hpp"

using namespace cavsq;

int main() {
  const auto spec = EnsembleSpec::from_spin(50);
  std::printf("%8s %10s %10s %10s\n", "x", "Omega", "Qx_opt", "xi2_min");
  for (double omega : {0.01, 0.4}) {
    for (double x : {0.25, 1.0, 4.0, 50.0}) {
      const DriveParams p = DriveParams::from_x(4.0, x, omega, 1.0);
      const OptimizeResult r = minimize_exact_over_qx(spec, p);
      std::printf("%8g %10g %10.4g %10.4g\n", x, omega, r.argmin, r.value);
    }
  }
  // zero detuning never squeezes
  const DriveParams p0 = DriveParams::from_delta(4.0, 0.0, 0.01, 1.0);
  std::printf("delta = 0, t = 1e4: xi2 = %.6f\n", evolve(spec, p0, 1e4).report.xi2);
}
