#include <doctest.h>

TEST_SUITE("calculus") {}
