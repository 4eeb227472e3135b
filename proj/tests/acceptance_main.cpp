// SPDX-License-Identifier: Apache-2.0
#include "mtaar/bench.hpp"
#include <iostream>
int main() { return mtaar::run_acceptance(std::cout); }
