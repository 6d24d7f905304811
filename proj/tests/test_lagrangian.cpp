#include <doctest.h>

TEST_SUITE("lagrangian") {}
