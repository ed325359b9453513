# Copyright 2026 The JPPF Authors.
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

"""Panoptic-part fusion engine.

Joint fusion of semantic, instance, and part predictions into a single
(semantic, part, instance) label map, the top-down merge baseline, the
metric suite (PQ/SQ/RQ, PartPQ, mIoU, mask AP, density), and a seeded
synthetic-scene generator with a scalar reference fusion.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from . import _core as _impl
except ImportError:  # pragma: no cover - in-tree builds put _core on sys.path
    from _core import *  # type: ignore  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
