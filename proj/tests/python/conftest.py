# Copyright 2026 The Gatesmith Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import os
import sys

# ctest points this at the in-tree build so that an editable install of an
# older build cannot shadow the module under test.
_tree = os.environ.get("GATESMITH_PYTHON_DIR")
if _tree:
    sys.path.insert(0, _tree)
    sys.meta_path[:] = [f for f in sys.meta_path if "editable" not in type(f).__module__]
    sys.modules.pop("gatesmith", None)
