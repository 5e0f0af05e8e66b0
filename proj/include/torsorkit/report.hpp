#pragma once

#include <string>
#include <utility>
#include <vector>

namespace torsorkit {

enum class Status { Pass, Fail, Uncertified };

std::string status_name(Status s); // "pass", "fail", "hypothesis-uncertified"

struct Check {
    std::string id;
    std::string paper_ref;
    Status status = Status::Pass;
    std::vector<std::string> witnesses;
    std::vector<std::pair<std::string, long>> dims;
    std::string note;
};

// Human readable reference derived from a check id: "def3.1.a" -> "Def 3.1 (a)".
std::string paper_ref_for(const std::string& id);

class Report {
public:
    std::string subject;
    std::string field;
    std::vector<Check> checks;

    Check& add(std::string id, Status s, std::vector<std::string> witnesses = {},
               std::vector<std::pair<std::string, long>> dims = {}, std::string note = {});
    Check& pass(std::string id, std::vector<std::pair<std::string, long>> dims = {});
    Check& fail(std::string id, std::vector<std::string> witnesses, std::string note = {});
    // pass when certified, hypothesis-uncertified otherwise
    Check& verified(std::string id, bool certified, std::vector<std::pair<std::string, long>> dims = {});
    void append(const Report& o);

    std::size_t count(Status s) const;
    bool failed() const { return count(Status::Fail) > 0; }
    const Check* find(const std::string& id) const;
};

} // namespace torsorkit
