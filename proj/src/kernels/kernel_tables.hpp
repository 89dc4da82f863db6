#pragma once

#include "fnls/kernels.hpp"

namespace fnls::kernels::detail {

const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;

}  // namespace fnls::kernels::detail
