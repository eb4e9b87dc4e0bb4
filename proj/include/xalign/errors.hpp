// SPDX-License-Identifier: Apache-2.0
//
// xalign: ergodic interference alignment with fixed precoding for the
// two-user X channel.
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

#ifndef XALIGN_ERRORS_HPP
#define XALIGN_ERRORS_HPP

#include <stdexcept>

namespace xalign
{
    // Operands do not satisfy an operation's contract (mismatched moduli,
    // zero vectors where a direction is required, non-unit inputs, ...).
    struct InvalidOperands : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct DivisionByZero : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    struct SingularMatrix : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // A matched finite-field set whose decoding matrix is singular.
    struct DegenerateSet : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // A fading geometry where the second projection stage is undefined.
    struct DegenerateGeometry : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct ResourceLimit : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct PreconditionError : std::logic_error
    {
        using std::logic_error::logic_error;
    };

    struct DomainError : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Bad configuration or command line. The message names the offending key.
    struct UsageError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };
} // namespace xalign

#endif
