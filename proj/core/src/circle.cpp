#include <algorithm>
#include <cmath>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/lattice.hpp"
#include "resonant/summation.hpp"

namespace resonant {

namespace {

std::int64_t isqrt(std::int64_t n) {
    if (n <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool same_parity(std::int64_t a, std::int64_t b) { return ((a ^ b) & 1) == 0; }

}  // namespace

std::vector<ModeIndex> circle_lattice_points(Doubled c, std::int64_t r4) {
    std::vector<ModeIndex> out;
    if (r4 < 0) return out;
    const std::int64_t R = isqrt(r4);
    // u = 2 p.x - c.x must share the parity of c.x.
    std::int64_t u = -R;
    if (!same_parity(u, c.x)) ++u;
    for (; u <= R; u += 2) {
        const std::int64_t rest = r4 - u * u;
        const std::int64_t v = isqrt(rest);
        if (v * v != rest || !same_parity(v, c.y)) continue;
        const std::int64_t px = (u + c.x) / 2;
        out.push_back({px, (c.y - v) / 2});
        if (v != 0) out.push_back({px, (c.y + v) / 2});
    }
    std::sort(out.begin(), out.end());
    return out;
}

CircleTail circle_tail_sum(Doubled c, std::int64_t r4, double A, double beta) {
    if (!(beta > 0.75))
        throw ConstraintError("beta=" + std::to_string(beta) +
                              " violates beta > 3/4, required for integrability of the circle tail sum");
    if (beta > 1.0) throw ConstraintError("beta=" + std::to_string(beta) + " outside (3/4, 1]");
    if (!(A > 0.0)) throw ConstraintError("A must be positive");
    CompensatedSum s;
    const double A2 = A * A;
    for (ModeIndex p : circle_lattice_points(c, r4)) {
        const double n2 = static_cast<double>(p.norm2());
        if (n2 >= A2) s.add(std::pow(1.0 + n2, -beta));
    }
    CircleTail t;
    t.sum = s.value();
    t.bound_ratio = t.sum / std::pow(A, 1.0 - 2.0 * beta);
    return t;
}

}  // namespace resonant
