#include <cstdlib>
#include <string_view>

#include "ppes/kernels.hpp"

namespace ppes::kernels {

const Table& active() {
  static const Table& chosen = [] () -> const Table& {
    const char* env = std::getenv("PPES_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar();
    if (const Table* t = avx2()) return *t;
    if (const Table* t = neon()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace ppes::kernels
