#pragma once
// Each test binary includes this once from its single translation unit.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
