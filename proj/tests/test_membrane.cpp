#include <doctest.h>

TEST_SUITE("membrane") {}
