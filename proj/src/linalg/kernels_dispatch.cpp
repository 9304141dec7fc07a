#include <cstdlib>
#include <cstring>

#include "bouss/core/error.hpp"
#include "bouss/linalg/kernels.hpp"

namespace bouss::linalg::kernels {

bool avx2_supported();

namespace {

const KernelTable* initial_choice() {
  const char* env = std::getenv("BOUSS_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
  if (avx2_supported()) return &avx2_table();
  return &scalar_table();
}

const KernelTable*& current() {
  static const KernelTable* t = initial_choice();
  return t;
}

}  // namespace

bool isa_available(Isa isa) { return isa == Isa::scalar || avx2_supported(); }

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  if (!isa_available(isa)) throw Error(std::string("SIMD variant not available: ") + name(isa));
  current() = (isa == Isa::avx2) ? &avx2_table() : &scalar_table();
}

const char* name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace bouss::linalg::kernels
