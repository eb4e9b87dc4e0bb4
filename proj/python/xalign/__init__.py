# SPDX-License-Identifier: Apache-2.0
#
# xalign: ergodic interference alignment with fixed precoding for the
# two-user X channel.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

from ._core import (
    Codebook,
    __version__,
    db_to_linear,
    dof_estimate,
    feedback_bits,
    gap_bound,
    lemma1_bound,
    overlap,
    quantization_error_ccdf,
    render,
    run,
    scaled_feedback_bits,
    sin2,
)

__all__ = [
    "Codebook",
    "__version__",
    "db_to_linear",
    "dof_estimate",
    "feedback_bits",
    "gap_bound",
    "lemma1_bound",
    "overlap",
    "quantization_error_ccdf",
    "render",
    "run",
    "scaled_feedback_bits",
    "sin2",
]
