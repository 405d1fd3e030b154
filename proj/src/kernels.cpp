#include "sgb/kernels.hpp"

#include "sgb/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace sgb::kernels {

#if defined(SGB_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(SGB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported;
#else
  return false;
#endif
}

Isa initial_isa() {
  Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  if (const char* env = std::getenv("SGB_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && best == Isa::avx2) return Isa::avx2;
  }
  return best;
}

struct Selection {
  std::atomic<Isa> isa;
  std::atomic<const KernelTable*> table;
};

Selection& current();

}  // namespace

const KernelTable* avx2_table() {
#if defined(SGB_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2_table_impl();
#endif
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (avx2_table()) out.push_back(Isa::avx2);
  return out;
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const KernelTable* t = avx2_table()) return *t;
    throw Error("AVX2 kernels are not available on this build or CPU");
  }
  return scalar_table();
}

namespace {

Selection& current() {
  static Selection sel{initial_isa(), &table_for(initial_isa())};
  return sel;
}

}  // namespace

const KernelTable& active() { return *current().table.load(std::memory_order_relaxed); }

Isa active_isa() { return current().isa.load(std::memory_order_relaxed); }

void select_isa(Isa isa) {
  const KernelTable& t = table_for(isa);
  Selection& sel = current();
  sel.isa.store(isa, std::memory_order_relaxed);
  sel.table.store(&t, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace sgb::kernels
