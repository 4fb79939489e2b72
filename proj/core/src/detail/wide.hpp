// SPDX-License-Identifier: Apache-2.0
//
// 113-bit working precision for the alternating hop-1 series.

#ifndef UAVRELAY_DETAIL_WIDE_HPP
#define UAVRELAY_DETAIL_WIDE_HPP

#include <boost/multiprecision/float128.hpp>

namespace uavrelay::detail {

using wide = boost::multiprecision::float128;

}  // namespace uavrelay::detail

#endif  // UAVRELAY_DETAIL_WIDE_HPP
