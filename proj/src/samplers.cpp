#include "mvps/samplers.hpp"

#include <cmath>

namespace mvps {

double beta_stick(double u, double alpha) {
    if (!(alpha > 0.0)) throw InvalidAlphaError("beta_stick: alpha must be positive");
    if (!(u >= 0.0) || !(u < 1.0))
        throw InvalidAlphaError("beta_stick: u must lie in [0,1)");
    return 1.0 - std::pow(1.0 - u, 1.0 / alpha);
}

}  // namespace mvps
