#pragma once

#include <string>
#include <string_view>

namespace decsum {

// Porter's original (1980) suffix-stripping algorithm. Expects lowercase
// input; words shorter than 3 letters or containing non-letters are
// returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace decsum
