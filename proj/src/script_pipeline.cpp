#include "choreo/script_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>

namespace choreo {

namespace {

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string segment_id(int order_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "seg-%03d", order_index);
  return buf;
}

std::string join_range(const std::string& normalized, const std::vector<text::SentenceSpan>& spans,
                       std::size_t first, std::size_t last) {
  return normalized.substr(spans[first].begin, spans[last].end - spans[first].begin);
}

}  // namespace

void validate_tour(const TourPlan& plan, const AssetLibrary& library) {
  if (plan.device_ids.empty()) throw Error(ErrorCode::invalid_input, "tour plan has no devices");
  std::set<std::string> seen;
  for (const auto& id : plan.device_ids) {
    if (library.find_device(id) == nullptr) {
      throw Error(ErrorCode::invalid_input, "tour plan names unknown device '" + id + "'");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::invalid_input, "tour plan lists device '" + id + "' twice");
    }
  }
}

std::string AnnotatedScript::full_text() const {
  std::string joined;
  for (const auto& dev : devices) {
    for (const auto& block : dev.blocks) {
      joined += block.text;
      joined += ' ';
    }
  }
  return text::normalize_whitespace(joined);
}

GenerationRequest make_generation_request(const TourPlan& plan, const AssetLibrary& library,
                                          NarrationTechniques techniques) {
  validate_tour(plan, library);
  GenerationRequest req;
  req.tour = plan;
  req.techniques = std::move(techniques);
  for (const auto& id : plan.device_ids) {
    req.devices.push_back(*library.find_device(id));
    for (const auto* lp : library.learning_points_of(id)) req.learning_points.push_back(*lp);
  }
  return req;
}

std::vector<std::string> validate_script(const AnnotatedScript& script, const GenerationRequest& request) {
  std::vector<std::string> problems;
  const auto& order = request.tour.device_ids;
  if (script.devices.size() != order.size()) {
    problems.push_back("script covers " + std::to_string(script.devices.size()) + " devices, tour has " +
                       std::to_string(order.size()));
  }
  bool any_text = false;
  for (std::size_t d = 0; d < script.devices.size(); ++d) {
    const auto& dev = script.devices[d];
    if (d < order.size() && dev.device_id != order[d]) {
      problems.push_back("device " + std::to_string(d) + " is '" + dev.device_id + "', tour expects '" +
                         order[d] + "'");
    }
    std::set<std::string> marked;
    for (std::size_t b = 0; b < dev.blocks.size(); ++b) {
      const auto& block = dev.blocks[b];
      const std::string where = dev.device_id + " block " + std::to_string(b);
      const auto norm = text::normalize_whitespace(block.text);
      if (norm.empty()) {
        problems.push_back(where + ": empty text");
        continue;
      }
      any_text = true;
      if (!block.learning_point_id) {
        if (!block.marked_text.empty()) problems.push_back(where + ": marked_text without a learning point");
        continue;
      }
      const auto& lp_id = *block.learning_point_id;
      auto it = std::find_if(request.learning_points.begin(), request.learning_points.end(),
                             [&](const LearningPoint& lp) { return lp.id == lp_id; });
      if (it == request.learning_points.end() || it->device_id != dev.device_id) {
        problems.push_back(where + ": marker '" + lp_id + "' is not a learning point of " + dev.device_id);
      }
      if (!marked.insert(lp_id).second) {
        problems.push_back(where + ": learning point '" + lp_id + "' marked more than once");
      }
      if (!block.marked_text.empty() &&
          norm.find(text::normalize_whitespace(block.marked_text)) == std::string::npos) {
        problems.push_back(where + ": marked_text does not occur in the block");
      }
    }
  }
  if (!any_text) problems.push_back("script has no narration text");
  return problems;
}

std::vector<std::string> default_transition_phrases() {
  return {"This equipment has now been introduced. Please follow me to the {next}."};
}

std::vector<AnnotatedScript> StubTextGenClient::generate(const GenerationRequest& request, int n_variants) {
  const auto phrases = request.techniques.transition_phrases.empty()
                           ? default_transition_phrases()
                           : request.techniques.transition_phrases;
  std::vector<AnnotatedScript> out;
  for (int v = 0; v < n_variants; ++v) {
    AnnotatedScript script;
    script.variant_label = "v" + std::to_string(v + 1);
    const auto n_devices = request.devices.size();
    for (std::size_t d = 0; d < n_devices; ++d) {
      const auto& device = request.devices[d];
      DeviceNarration narration;
      narration.device_id = device.id;
      std::vector<const LearningPoint*> lps;
      for (const auto& lp : request.learning_points) {
        if (lp.device_id == device.id) lps.push_back(&lp);
      }
      if (!lps.empty()) {
        std::rotate(lps.begin(), lps.begin() + static_cast<std::ptrdiff_t>(v % lps.size()), lps.end());
      }
      for (const auto* lp : lps) narration.blocks.push_back({lp->text, lp->id, {}});
      std::string transition;
      if (d + 1 < n_devices) {
        transition = phrases[d % phrases.size()];
        transition = replace_all(transition, "{next}", request.devices[d + 1].name);
      } else {
        transition = "That concludes our look at the {current}. Thank you for following the tour.";
      }
      transition = replace_all(transition, "{current}", device.name);
      narration.blocks.push_back({transition, std::nullopt, {}});
      script.devices.push_back(std::move(narration));
    }
    out.push_back(std::move(script));
  }
  return out;
}

GenerationOutcome generate_script(const GenerationRequest& request, TextGenClient& client, int n_variants) {
  if (n_variants < 1) throw Error(ErrorCode::precondition, "n_variants must be at least 1");
  std::vector<AnnotatedScript> candidates;
  try {
    candidates = client.generate(request, n_variants);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::client_failure, std::string("text generation client failed: ") + e.what());
  }
  GenerationOutcome outcome;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& script = candidates[i];
    if (outcome.scripts.size() == static_cast<std::size_t>(n_variants)) {
      outcome.diagnostics.push_back("variant " + std::to_string(i + 1) + " dropped: more than n_variants returned");
      continue;
    }
    if (script.variant_label.empty()) script.variant_label = "v" + std::to_string(i + 1);
    auto problems = validate_script(script, request);
    if (!labels.insert(script.variant_label).second) problems.push_back("duplicate variant label");
    if (!problems.empty()) {
      std::string msg = "variant '" + script.variant_label + "' rejected:";
      for (const auto& p : problems) msg += " " + p + ";";
      outcome.diagnostics.push_back(std::move(msg));
      continue;
    }
    outcome.scripts.push_back(std::move(script));
  }
  if (outcome.scripts.empty()) {
    std::string msg = "no valid script variant";
    for (const auto& d : outcome.diagnostics) msg += "\n  " + d;
    throw Error(ErrorCode::client_failure, msg);
  }
  return outcome;
}

std::vector<SpeechSegment> segment_script(const AnnotatedScript& script, const AssetLibrary& library,
                                          const SegmentationOptions& options) {
  if (script.full_text().empty()) throw Error(ErrorCode::invalid_input, "empty script");
  std::vector<SpeechSegment> out;
  int order = 0;
  auto push = [&](const std::string& device, std::string text, std::optional<std::string> lp) {
    SpeechSegment seg;
    seg.order_index = ++order;
    seg.id = segment_id(seg.order_index);
    seg.device_id = device;
    seg.text = std::move(text);
    seg.learning_point_id = std::move(lp);
    out.push_back(std::move(seg));
  };

  for (const auto& dev : script.devices) {
    for (const auto& block : dev.blocks) {
      const auto norm = text::normalize_whitespace(block.text);
      if (norm.empty()) continue;
      if (!block.learning_point_id) {
        push(dev.device_id, norm, std::nullopt);
        continue;
      }
      const auto* lp = library.find_learning_point(*block.learning_point_id);
      if (lp == nullptr || lp->device_id != dev.device_id) {
        throw Error(ErrorCode::invalid_input,
                    "marker '" + *block.learning_point_id + "' does not resolve for " + dev.device_id);
      }
      const auto spans = text::split_sentences(norm, options.terminators);
      std::size_t first = 0;
      std::size_t last = spans.size() - 1;
      const auto marked = text::normalize_whitespace(block.marked_text);
      if (!marked.empty()) {
        const auto pos = norm.find(marked);
        if (pos == std::string::npos) {
          throw Error(ErrorCode::invalid_input, "marked_text not found in block for '" + lp->id + "'");
        }
        const auto end = pos + marked.size();
        first = spans.size();
        for (std::size_t s = 0; s < spans.size(); ++s) {
          if (spans[s].end > pos && spans[s].begin < end) {
            if (first == spans.size()) first = s;
            last = s;
          }
        }
      }
      if (first > 0) push(dev.device_id, join_range(norm, spans, 0, first - 1), std::nullopt);
      push(dev.device_id, join_range(norm, spans, first, last), lp->id);
      if (last + 1 < spans.size()) {
        push(dev.device_id, join_range(norm, spans, last + 1, spans.size() - 1), std::nullopt);
      }
    }
  }
  return out;
}

StubSpeechClient::StubSpeechClient(double rate_chars_per_sec) : rate_(rate_chars_per_sec) {
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
    throw Error(ErrorCode::precondition, "stub speech rate must be positive");
  }
}

SpeechAudio StubSpeechClient::synthesize(std::string_view input) {
  const auto chars = text::char_count(input);
  if (chars == 0) throw Error(ErrorCode::invalid_input, "cannot synthesize empty text");
  char ref[48];
  std::snprintf(ref, sizeof ref, "stub://audio/%016llx.wav",
                static_cast<unsigned long long>(text::fnv1a(input)));
  const auto ms = static_cast<std::int64_t>(std::ceil(static_cast<double>(chars) * 1000.0 / rate_));
  return {ref, ms};
}

std::vector<SpeechSegment> synthesize(std::vector<SpeechSegment> segments, SpeechClient& client,
                                      const SynthesisOptions& options) {
  for (const auto& seg : segments) {
    if (text::normalize_whitespace(seg.text).empty()) {
      throw Error(ErrorCode::invalid_input, "segment '" + seg.id + "' has empty text");
    }
  }

  struct Outcome {
    SpeechAudio audio;
    std::string error;
  };
  auto call = [&client](const std::string& text) -> Outcome {
    try {
      auto audio = client.synthesize(text);
      if (audio.duration_ms <= 0) return {{}, "client returned a non-positive duration"};
      return {std::move(audio), {}};
    } catch (const std::exception& e) {
      return {{}, e.what()};
    }
  };

  std::vector<Outcome> results(segments.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, options.max_concurrency));
  for (std::size_t base = 0; base < segments.size(); base += width) {
    const std::size_t stop = std::min(segments.size(), base + width);
    if (width == 1) {
      results[base] = call(segments[base].text);
      continue;
    }
    std::vector<std::future<Outcome>> pending;
    for (std::size_t i = base; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, call, segments[i].text));
    }
    for (std::size_t i = base; i < stop; ++i) results[i] = pending[i - base].get();
  }

  std::vector<std::string> completed;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (results[i].error.empty()) completed.push_back(segments[i].id);
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!results[i].error.empty()) {
      throw SynthesisError("speech synthesis failed for " + segments[i].id + ": " + results[i].error,
                           segments[i].id, std::move(completed));
    }
    segments[i].audio_ref = results[i].audio.audio_ref;
    segments[i].duration_ms = results[i].audio.duration_ms;
  }
  return segments;
}

}  // namespace choreo
