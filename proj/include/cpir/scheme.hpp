// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "cpir/mds.hpp"
#include "cpir/params.hpp"

namespace cpir {

/// Everything both client and servers agree on ahead of time.
struct Scheme {
  SchemeParams params;
  Field field;
  Generator generator;
};

/// Smallest prime above max(N, 256).
std::uint64_t default_modulus(std::int64_t n_servers);

/// Derives parameters, picks the field (default_modulus unless given) and the
/// generator (Vandermonde unless given; a given one must be K x N and MDS).
Scheme make_scheme(std::int64_t m, std::int64_t n_servers, std::int64_t k_code,
                   std::optional<std::uint64_t> modulus = std::nullopt,
                   std::optional<Matrix> generator = std::nullopt);

}  // namespace cpir
