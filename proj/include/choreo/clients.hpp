#pragma once

#include <memory>
#include <string>

#include "choreo/composer.hpp"
#include "choreo/config.hpp"
#include "choreo/script_pipeline.hpp"

namespace choreo {

// HTTP-backed clients. Each POSTs one JSON document and expects one back:
//   text generation: {"request": <GenerationRequest>, "n_variants": n}
//                    -> {"scripts": [<AnnotatedScript>...]}
//   speech:          {"text": "..."} -> {"audio_ref": "...", "duration_ms": n}
//   composer:        {"segment": {...}, "visuals": [ids], "gestures": [ids]}
//                    -> {"visuals": [ids], "gestures": [ids], "rationale": "..."}
class HttpTextGenClient final : public TextGenClient {
 public:
  explicit HttpTextGenClient(ClientEndpoint endpoint);
  std::vector<AnnotatedScript> generate(const GenerationRequest& request, int n_variants) override;

 private:
  ClientEndpoint endpoint_;
};

class HttpSpeechClient final : public SpeechClient {
 public:
  explicit HttpSpeechClient(ClientEndpoint endpoint);
  SpeechAudio synthesize(std::string_view text) override;

 private:
  ClientEndpoint endpoint_;
};

class HttpComposerClient final : public ComposerClient {
 public:
  explicit HttpComposerClient(ClientEndpoint endpoint);
  Selection propose(const SpeechSegment& segment, const std::vector<VisualAsset>& visuals,
                    const std::vector<GestureUnit>& gestures) override;

 private:
  ClientEndpoint endpoint_;
};

struct Clients {
  std::unique_ptr<TextGenClient> text_gen;
  std::unique_ptr<SpeechClient> speech;
  std::unique_ptr<ComposerClient> composer;  // null: rule-based composition
};

Clients make_clients(const Config& config);

}  // namespace choreo
