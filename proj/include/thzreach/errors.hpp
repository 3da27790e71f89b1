// SPDX-License-Identifier: Apache-2.0
//
// thzreach - mm-wave and THz indoor propagation and link-budget simulator
// Copyright (C) 2026 The thzreach authors
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

#ifndef THZREACH_ERRORS_HPP
#define THZREACH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thzreach
{
    // Malformed record in a text input; line() is 1-based
    class parse_error : public std::runtime_error
    {
    public:
        parse_error(const std::string &what, std::size_t line) : std::runtime_error(what), line_(line) {}
        std::size_t line() const { return line_; }

    private:
        std::size_t line_;
    };

    // Link has no propagation path
    class outage_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // More link demands than sub-windows
    class allocation_error : public std::runtime_error
    {
    public:
        allocation_error(const std::string &what, std::vector<int> unassigned)
            : std::runtime_error(what), unassigned_(std::move(unassigned)) {}
        const std::vector<int> &unassigned() const { return unassigned_; }

    private:
        std::vector<int> unassigned_;
    };
}

#endif
