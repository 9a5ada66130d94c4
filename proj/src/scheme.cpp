// SPDX-License-Identifier: Apache-2.0

#include "cpir/scheme.hpp"

#include <algorithm>

namespace cpir {

std::uint64_t default_modulus(std::int64_t n_servers) {
  return smallest_prime_gt(static_cast<std::uint64_t>(std::max<std::int64_t>(n_servers, 256)));
}

Scheme make_scheme(std::int64_t m, std::int64_t n_servers, std::int64_t k_code, std::optional<std::uint64_t> modulus,
                   std::optional<Matrix> generator) {
  SchemeParams p = derive_params(m, n_servers, k_code);
  const Field field(modulus.value_or(default_modulus(n_servers)));
  if (generator) {
    if (!(generator->field() == field)) fail(ErrorCode::kBadArgument, "generator field differs from the scheme field");
    if (generator->rows() != static_cast<std::size_t>(k_code) || generator->cols() != static_cast<std::size_t>(n_servers)) {
      fail(ErrorCode::kDimError, "generator must be K x N");
    }
    return {std::move(p), field, Generator(std::move(*generator))};
  }
  return {std::move(p), field,
          Generator::vandermonde(static_cast<std::size_t>(n_servers), static_cast<std::size_t>(k_code), field)};
}

}  // namespace cpir
