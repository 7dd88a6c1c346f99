// Copyright 2026 The mmimo Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMIMO_UNITS_HPP_
#define MMIMO_UNITS_HPP_

// All internal quantities are linear (Watts, linear gains). Decibel values
// only appear at I/O boundaries and pass through these helpers.

namespace mmimo {

double db_to_linear(double db);
double linear_to_db(double linear);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace mmimo

#endif  // MMIMO_UNITS_HPP_
