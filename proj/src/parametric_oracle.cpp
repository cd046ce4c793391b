/*
 * Copyright 2026 The fieldcov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fieldcov/parametric_oracle.hpp"

#include "fieldcov/error.hpp"

#include <fmt/format.h>

namespace fieldcov {

void RectQuery::validate() const {
  if (lane_count < 5 || lane_count % 2 == 0)
    throw Error(ErrorCode::kUnsupportedCase, fmt::format("closed forms need odd N >= 5, got {}", lane_count));
  rect.validate();
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(ErrorCode::kInvalidParams, "p must lie in [0, 1]");
  if (!(entrance_offset >= 0.0 && entrance_offset <= rect.operating_width))
    throw Error(ErrorCode::kInvalidParams, "q_l must lie in [0, W0]");
}

double delta_return(const EdgeClass& cls, const RectQuery& q) {
  q.validate();
  const int n = q.lane_count;
  const int j = cls.index;
  const double w0 = q.rect.operating_width;
  const double h = q.rect.effective_lane();
  const double r = q.rect.turning_radius;
  const double p = q.fraction;
  switch (cls.context) {
    case EdgeContext::kHeadlandReturn:
      if (j == 0 || j == 1 || j == n + 1 || j == 2 * n + 1) return 2.0 * (n - 3) * w0;
      if (j > 1 && j < n) return cls.even() ? 2.0 * (n - j - 1) * w0 : 2.0 * (n - j - 2) * w0;
      return 0.0;
    case EdgeContext::kLaneReturn:
      if (j == 1) return 2.0 * (n - 3) * w0;
      if (cls.even()) return 2.0 * (1.0 - p) * h + 2.0 * (n - j - 1) * w0 - 2.0 * r;
      return 2.0 * p * h + 2.0 * (n - j) * w0 - 2.0 * r;
    default:
      throw Error(ErrorCode::kInvalidParams, "edge class is not a return context");
  }
}

double delta_resume(const EdgeClass& cls, const RectQuery& q) {
  q.validate();
  const int n = q.lane_count;
  const int j = cls.index;
  const double w0 = q.rect.operating_width;
  const double h = q.rect.effective_lane();
  const double r = q.rect.turning_radius;
  const double p = q.fraction;
  const double ql = q.entrance_offset;
  switch (cls.context) {
    case EdgeContext::kHeadlandResume:
      if ((j >= 3 && j <= n) || j == 2 * n + 2) return -2.0 * ql;
      if (j == 2 * n + 1) return 0.0;
      if (j >= n + 2 && j <= 2 * n) {
        return cls.even() ? -2.0 * ql + (4.0 * n - 2.0 * j) * w0 - 2.0 * r
                          : -2.0 * ql + (4.0 * n - 2.0 * j - 2.0) * w0 - 2.0 * r;
      }
      return 0.0;
    case EdgeContext::kLaneResume:
      if (j == 1) return 0.0;
      if (j == 2) return -2.0 * (1.0 - p) * h - 2.0 * w0 + 2.0 * r;
      if (cls.even()) return -2.0 * (1.0 - p) * h - 2.0 * w0 - 2.0 * ql;
      return -2.0 * p * h - 2.0 * ql;
    default:
      throw Error(ErrorCode::kInvalidParams, "edge class is not a resume context");
  }
}

double delta_single_run(Pattern method, int lane_count, double operating_width) {
  if (lane_count < 1 || lane_count % 2 == 0)
    throw Error(ErrorCode::kUnsupportedCase, fmt::format("single-run closed form needs odd N, got {}", lane_count));
  switch (method) {
    case Pattern::kCirc: return -(lane_count - 1) * operating_width;
    case Pattern::kCircStar: return (lane_count - 3) * operating_width;
    case Pattern::kAbp: return 0.0;
  }
  throw Error(ErrorCode::kUnsupportedCase, "unknown pattern");
}

double lane_offset(const RectParams& rp, double fraction) {
  return fraction * rp.effective_lane() - rp.quarter_arc() + rp.turning_radius;
}

int table_index(const TransitionGraph& g, int edge) {
  const GraphEdge& e = g.edge(edge);
  return e.kind == EdgeKind::kLane ? e.lane : e.a;
}

FieldSpec make_rect_field(double lane_length, int lane_count, double operating_width, double turning_radius,
                          double entrance_offset) {
  if (!(lane_length > 0.0) || lane_count < 1 || !(operating_width > 0.0) || !(turning_radius >= 0.0))
    throw Error(ErrorCode::kInvalidParams, "rectangle needs H0 > 0, N >= 1, W0 > 0 and R >= 0");
  if (!(entrance_offset >= 0.0 && entrance_offset < operating_width))
    throw Error(ErrorCode::kInvalidParams, "entrance offset must lie in [0, W0)");
  const double w0 = operating_width;
  const double width = (lane_count + 2) * w0;
  const double height = lane_length + w0;
  FieldSpec spec;
  spec.contour = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}};
  spec.operating_width = w0;
  spec.turning_radius = turning_radius;
  spec.headland_offset = 0.5 * w0;
  spec.entrance = {1.5 * w0 + entrance_offset, height - 0.5 * w0};
  return spec;
}

}  // namespace fieldcov
