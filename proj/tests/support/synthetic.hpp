// Copyright 2026 The Authors.
//
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

// Synthetic observation generators shared by the semantic-model and planner
// tests: box-face scans with controlled density and viewing origins.

#pragma once

#include <vector>

#include "semcover/geometry.hpp"
#include "semcover/semantic_model.hpp"

namespace semcover::testing {

// Points on the axis-aligned plane patch (fixed axis at `plane`), sampled on
// a grid with the given spacing.
inline std::vector<Vec3> plane_points(int axis, double plane, const Vec3& lo, const Vec3& hi,
                                      double spacing) {
  std::vector<Vec3> pts;
  const int u = (axis + 1) % 3;
  const int v = (axis + 2) % 3;
  for (double a = lo(u) + 0.5 * spacing; a < hi(u); a += spacing)
    for (double b = lo(v) + 0.5 * spacing; b < hi(v); b += spacing) {
      Vec3 p;
      p(axis) = plane;
      p(u) = a;
      p(v) = b;
      pts.push_back(p);
    }
  return pts;
}

// Feeds scans of the chosen faces of an axis-aligned box into a record, one
// scan per face, each observed from outside along the face normal.
inline void observe_box_faces(SemanticRecord& record, const AxisBox& box, double spacing,
                              const std::vector<int>& face_ids) {
  for (const int fid : face_ids) {
    const int axis = fid / 2;
    const bool positive = fid % 2 == 1;
    const double plane = positive ? box.max(axis) : box.min(axis);
    Vec3 origin = box.center();
    origin(axis) = plane + (positive ? 3.0 : -3.0);
    record.accumulate_points(origin, plane_points(axis, plane, box.min, box.max, spacing));
  }
}

// One scan of the box from an arbitrary origin, the way a range sensor sees
// it: every face whose outward normal faces the origin contributes points.
inline void observe_box_from(SemanticRecord& record, const AxisBox& box, double spacing,
                             const Vec3& origin) {
  std::vector<Vec3> pts;
  for (int fid = 0; fid < 6; ++fid) {
    const int axis = fid / 2;
    const bool positive = fid % 2 == 1;
    const double plane = positive ? box.max(axis) : box.min(axis);
    const double outward = positive ? 1.0 : -1.0;
    if ((origin(axis) - plane) * outward <= 0.0) continue;  // back face
    for (const Vec3& p : plane_points(axis, plane, box.min, box.max, spacing)) pts.push_back(p);
  }
  record.accumulate_points(origin, pts);
}

// Scans from the eight corner directions, which sees every face from
// several oblique vantage points.
inline void observe_box_all_around(SemanticRecord& record, const AxisBox& box, double spacing,
                                   double standoff = 2.5) {
  for (int k = 0; k < 8; ++k) {
    const Vec3 dir((k & 1) ? 1.0 : -1.0, (k & 2) ? 1.0 : -1.0, (k & 4) ? 1.0 : -1.0);
    observe_box_from(record, box, spacing, box.center() + standoff * dir.normalized());
  }
}

}  // namespace semcover::testing
