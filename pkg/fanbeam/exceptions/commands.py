# Copyright 2021 The fanbeam Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
fanbeam commands exceptions
"""

from fanbeam.exceptions.base import FanbeamBaseException

__all__ = (
    "FanbeamCommandException",
)


class FanbeamCommandException(FanbeamBaseException):
    """ Command level failure (missing inputs, inconsistent files) """
    _STR = "fanbeam command exception: {message}"
