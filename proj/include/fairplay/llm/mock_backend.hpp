#pragma once

// Deterministic offline backend. It recognizes the three protocols by their
// prompts and answers like a very simple model would:
//  - writer: a four-suspect mystery in which one suspect is framed early, the
//    culprit is fixed by a physical clue halfway through and confesses in the
//    last paragraphs; choices depend on the request nonce and on what earlier
//    paragraphs already committed to;
//  - culprit judge: trusts a confession when it sees one, otherwise scores
//    suspects by how often and how suspiciously they are mentioned;
//  - paragraph-filling judge: prefers options consistent with a visible confession.

#include <string>
#include <vector>

#include "fairplay/llm/chat.hpp"

namespace fairplay::llm {

inline const std::vector<std::string> kMockDefaultSuspects = {"Abbott", "Blake", "Carver", "Dunne"};

class MockBackend final : public ChatBackend {
public:
    std::string identity() const override { return "mock-v1"; }
    std::string complete(const ChatRequest& request) override;
};

}  // namespace fairplay::llm
