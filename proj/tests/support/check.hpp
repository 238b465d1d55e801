#pragma once

#include <doctest.h>

#include "arbor/common.hpp"

// CHECK that `expr` throws arbor::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                          \
  do {                                                            \
    bool thrown_ = false;                                         \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const arbor::Error& e_) {                            \
      thrown_ = true;                                             \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());          \
    }                                                             \
    CHECK_MESSAGE(thrown_, "expected an arbor::Error: " #expr);   \
  } while (0)
