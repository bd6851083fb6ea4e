// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace kanlab {

inline constexpr const char* kToolName = "kanlab";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace kanlab
