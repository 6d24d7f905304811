#include <doctest.h>

TEST_SUITE("starprod") {}
