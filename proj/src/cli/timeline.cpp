// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/cli/timeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eigv::cli {

TimelineExport make_timeline(const trainkit::EigvModel& model, const datagen::Sample& sample,
                             std::size_t sample_id, bool with_truth) {
  const numkit::Tensor<float>* v = &sample.video;
  const numkit::Tensor<float>* q = &sample.question;
  const auto pred = model.predict(trainkit::stack_inputs(std::span(&v, 1), std::span(&q, 1)));
  const auto logits = pred.logits.row(0);

  TimelineExport t;
  t.sample_id = sample_id;
  t.answer = sample.answer;
  t.predicted = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
  for (std::size_t k = 0; k < pred.causal.size(); ++k) {
    TimelineSegment s;
    s.clip_index = k;
    s.causal = pred.causal[k];
    s.p_c = pred.causal_scores[k];
    if (with_truth && k < sample.truth_mask.size()) s.truth_causal = sample.truth_mask[k];
    t.segments.push_back(s);
  }
  return t;
}

std::string render_csv(const TimelineExport& t) {
  std::ostringstream out;
  out << "sample_id,clip_index,assignment,p_c,truth_causal\n";
  for (const auto& s : t.segments) {
    char pc[32];
    std::snprintf(pc, sizeof pc, "%.6f", s.p_c);
    out << t.sample_id << ',' << s.clip_index << ',' << (s.causal ? "causal" : "environment")
        << ',' << pc << ',';
    if (s.truth_causal) out << (*s.truth_causal ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

std::string render_svg(const TimelineExport& t) {
  constexpr int kCell = 36, kBar = 60, kPad = 10, kTop = 28;
  const int width = 2 * kPad + kCell * static_cast<int>(t.segments.size());
  const int height = kTop + kBar + 34;
  double peak = 0.0;
  for (const auto& s : t.segments) peak = std::max(peak, s.p_c);
  if (peak <= 0.0) peak = 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "  <text x=\"" << kPad << "\" y=\"16\">sample " << t.sample_id << "  answer " << t.answer
      << "  predicted " << t.predicted << "</text>\n";
  for (const auto& s : t.segments) {
    const int x = kPad + kCell * static_cast<int>(s.clip_index);
    const int h = static_cast<int>(kBar * s.p_c / peak + 0.5);
    const char* fill = s.causal ? "#d9534f" : "#8fa8c8";
    out << "  <rect x=\"" << x << "\" y=\"" << kTop << "\" width=\"" << kCell - 2
        << "\" height=\"" << kBar << "\" fill=\"#f2f2f2\"/>\n";
    out << "  <rect x=\"" << x << "\" y=\"" << kTop + kBar - h << "\" width=\"" << kCell - 2
        << "\" height=\"" << h << "\" fill=\"" << fill << "\"><title>clip " << s.clip_index
        << " p_c=" << s.p_c << "</title></rect>\n";
    if (s.truth_causal && *s.truth_causal) {
      out << "  <rect x=\"" << x << "\" y=\"" << kTop + kBar + 4 << "\" width=\"" << kCell - 2
          << "\" height=\"6\" fill=\"#222\"/>\n";
    }
    out << "  <text x=\"" << x + 2 << "\" y=\"" << height - 6 << "\">" << s.clip_index
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<std::filesystem::path> write_timeline(const TimelineExport& t,
                                                  const std::filesystem::path& dir,
                                                  const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths{dir / (stem + ".csv"), dir / (stem + ".svg")};
  const std::string bodies[] = {render_csv(t), render_svg(t)};
  for (int i = 0; i < 2; ++i) {
    std::ofstream out(paths[i]);
    if (!out) throw Error(Errc::kIo, "cannot write " + paths[i].string());
    out << bodies[i];
  }
  return paths;
}

}  // namespace eigv::cli
