// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fermiflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fermiflow
