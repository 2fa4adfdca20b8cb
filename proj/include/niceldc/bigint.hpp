#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace niceldc {

using BigInt = boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

} // namespace niceldc
