#pragma once
#include "core/errors.hpp"

namespace testing_util {

inline bool throws_code(auto&& fn, hsl::ErrorCode c) {
  try {
    fn();
  } catch (const hsl::Error& e) {
    return e.code() == c;
  }
  return false;
}

}  // namespace testing_util
