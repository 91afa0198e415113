// SPDX-License-Identifier: Apache-2.0
//
// risim - link-level simulator for reconfigurable intelligent surfaces
// Copyright (C) 2026 The risim authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace risim
{
    // Malformed or physically invalid input (maps to CLI exit code 2)
    class invalid_input : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A computation that cannot produce a result, e.g. a rank-deficient solve (exit code 3)
    class numeric_failure : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}
