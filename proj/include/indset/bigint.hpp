// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace indset {

// Point counts of secret spaces overflow 64 bits quickly (a handful of fields
// with 10^8-wide ranges), so every size is an arbitrary-precision integer.
using BigInt = boost::multiprecision::cpp_int;

}  // namespace indset
