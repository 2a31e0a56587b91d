// SPDX-License-Identifier: Apache-2.0
//
// riscatter: joint primary/backscatter rate characterization for scatter-assisted links
// Copyright (C) 2026 riscatter contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef riscatter_units_H
#define riscatter_units_H

#include <cmath>

namespace riscatter
{

// All rates are carried in nats internally; conversion to bits happens at the
// reporting boundary only.

inline double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double watts)
{
    return 10.0 * std::log10(watts) + 30.0;
}

inline double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

inline double nats_to_bits(double nats)
{
    return nats / M_LN2;
}

inline double bits_to_nats(double bits)
{
    return bits * M_LN2;
}

} // namespace riscatter

#endif
