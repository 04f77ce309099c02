#include "chd/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chd/errors.hpp"
#include "chd/snapshot.hpp"

namespace chd {

ScalarField generate(const InitSpec& spec, const Grid& grid) {
  const double bound = 1.0 - spec.clip_margin;
  auto clip = [bound](double v) { return std::clamp(v, -bound, bound); };
  ScalarField f(grid);
  switch (spec.kind) {
    case InitSpec::Kind::Uniform:
      for (double& v : f.v) v = clip(spec.value);
      break;
    case InitSpec::Kind::TanhDisc:
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          const double dx = grid.xc(i) - spec.cx;
          const double dy = grid.yc(j) - spec.cy;
          const double d = std::sqrt(dx * dx + dy * dy);
          const double v = spec.outer + (spec.inner - spec.outer) * 0.5 *
                                            (1.0 - std::tanh((d - spec.radius) /
                                                             spec.width));
          f(i, j) = clip(v);
        }
      break;
    case InitSpec::Kind::Random: {
      // Cell-wise i.i.d. uniform perturbations; the 53-bit mapping is spelled
      // out so trajectories are bitwise reproducible across platforms.
      std::mt19937_64 eng(spec.seed);
      for (double& v : f.v) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        v = clip(spec.mean + spec.amplitude * (2.0 * u - 1.0));
      }
      break;
    }
    case InitSpec::Kind::Snapshot: {
      Snapshot s = read_snapshot(spec.path);
      if (!s.field.grid.same_layout(grid))
        throw ConfigError("init.kind snapshot: grid mismatch (" + spec.path + ")");
      f = std::move(s.field);
      break;
    }
  }
  return f;
}

}  // namespace chd
