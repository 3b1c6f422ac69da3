#include "lfss/hurst.hpp"

#include <cmath>
#include <sstream>

#include "lfss/errors.hpp"

namespace lfss {

void HurstVector::validate_ordering() const {
    require(!H.empty(), ErrorKind::ParameterDomain, "Hurst vector is empty");
    for (std::size_t l = 0; l < H.size(); ++l) {
        require(std::isfinite(H[l]) && H[l] > 0.0 && H[l] < 1.0, ErrorKind::ParameterDomain,
                "H_" + std::to_string(l + 1) + " must lie in (0, 1)");
        if (l > 0)
            require(H[l - 1] <= H[l], ErrorKind::Ordering,
                    "Hurst indices must be sorted: H_1 <= ... <= H_N");
    }
}

void HurstVector::validate() const {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0, ErrorKind::ParameterDomain,
            "alpha must lie in (0, 2]");
    validate_ordering();
    if (H.front() <= 1.0 / alpha) {
        std::ostringstream os;
        os << "continuity regime requires H_1 > 1/alpha = " << 1.0 / alpha << ", got H_1 = " << H.front();
        throw Error(ErrorKind::Regime, os.str());
    }
}

}  // namespace lfss
