#include "torsorkit/report.hpp"

#include <cctype>
#include <map>

namespace torsorkit {

std::string status_name(Status s)
{
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Uncertified: return "hypothesis-uncertified";
    }
    return "fail";
}

std::string paper_ref_for(const std::string& id)
{
    static const std::map<std::string, std::string> kinds = {
        {"def", "Def"},   {"thm", "Thm"},       {"lem", "Lemma"}, {"prop", "Prop"}, {"cor", "Cor"},
        {"rem", "Remark"}, {"eq", "Eq"},        {"sec", "Sec"},   {"ex", "Example"}};
    std::size_t i = 0;
    while (i < id.size() && std::islower(static_cast<unsigned char>(id[i]))) ++i;
    auto it = kinds.find(id.substr(0, i));
    if (it == kinds.end()) return id;
    std::size_t j = id.find('.', i);
    // "3.1" and "A.1" keep their inner dot, "sec2.chi" has none
    if (j != std::string::npos && j + 1 < id.size() && std::isdigit(static_cast<unsigned char>(id[j + 1])))
        j = id.find('.', j + 1);
    std::string num = id.substr(i, j == std::string::npos ? std::string::npos : j - i);
    std::string out = it->second + " " + num;
    if (j != std::string::npos) out += " (" + id.substr(j + 1) + ")";
    return out;
}

Check& Report::add(std::string id, Status s, std::vector<std::string> witnesses,
                   std::vector<std::pair<std::string, long>> dims, std::string note)
{
    Check c;
    c.paper_ref = paper_ref_for(id);
    c.id = std::move(id);
    c.status = s;
    c.witnesses = std::move(witnesses);
    c.dims = std::move(dims);
    c.note = std::move(note);
    checks.push_back(std::move(c));
    return checks.back();
}

Check& Report::pass(std::string id, std::vector<std::pair<std::string, long>> dims)
{
    return add(std::move(id), Status::Pass, {}, std::move(dims));
}

Check& Report::fail(std::string id, std::vector<std::string> witnesses, std::string note)
{
    return add(std::move(id), Status::Fail, std::move(witnesses), {}, std::move(note));
}

Check& Report::verified(std::string id, bool certified, std::vector<std::pair<std::string, long>> dims)
{
    return add(std::move(id), certified ? Status::Pass : Status::Uncertified, {}, std::move(dims));
}

void Report::append(const Report& o)
{
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
}

std::size_t Report::count(Status s) const
{
    std::size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
}

const Check* Report::find(const std::string& id) const
{
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

} // namespace torsorkit
