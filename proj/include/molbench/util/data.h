// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace molbench::data {

// Contents of a table from data/ compiled into the library ("groups.txt",
// "crippen.txt", "qed.txt", "tpsa.txt"); empty when unknown.
std::string_view embedded(std::string_view name);

}  // namespace molbench::data
