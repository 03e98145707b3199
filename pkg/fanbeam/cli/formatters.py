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
fanbeam help formatter for the CLI factory
"""

from argparse import (
    RawTextHelpFormatter,
    ArgumentDefaultsHelpFormatter
)

__all__ = (
    "RawTextArgsHelpFormatter",
)


class RawTextArgsHelpFormatter(RawTextHelpFormatter,
                               ArgumentDefaultsHelpFormatter):
    """
    Keeps the line breaks of help texts and appends defaults.
    Options taking a value are listed once as ``-s, --long VALUE``.
    """

    def _format_action_invocation(self, action):
        if not action.option_strings or action.nargs == 0:
            return super()._format_action_invocation(action)
        default = self._get_default_metavar_for_optional(action)
        return '{flags} {value}'.format(
            flags=', '.join(action.option_strings),
            value=self._format_args(action, default)
        )
