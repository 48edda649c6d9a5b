#include "ppes/common.hpp"

#include <fmt/format.h>

namespace ppes {

std::string to_string(const State& s) {
  return fmt::format("(rho={:.17g}, m=[{:.17g}, {:.17g}, {:.17g}], Et={:.17g})", s.rho, s.m[0], s.m[1],
                     s.m[2], s.Et);
}

InadmissibleState::InadmissibleState(const State& s, long e, long pt)
    : std::runtime_error(fmt::format("inadmissible state at element {} point {}: {}", e, pt, to_string(s))),
      state(s),
      element(e),
      point(pt) {}

}  // namespace ppes
