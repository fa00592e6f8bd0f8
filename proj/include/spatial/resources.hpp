#pragma once

#include <string_view>

// Shipped resource files, compiled into the library from resources/.
namespace spatial::resources {

std::string_view lexicon_tsv();
std::string_view rules_dsl();
std::string_view variants_tsv();

}  // namespace spatial::resources
