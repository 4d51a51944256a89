#include <cstdlib>
#include <string_view>

#include "fsd/kernels/kernels.hpp"

namespace fsd::kernels {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar::kTable;
    case Isa::kAvx2:
#if defined(FSD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      if (__builtin_cpu_supports("avx2")) return &avx2::kTable;
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("FSD_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar::kTable;
    if (const KernelTable* t = table_for(Isa::kAvx2)) return *t;
    return scalar::kTable;
  }();
  return table;
}

}  // namespace fsd::kernels
