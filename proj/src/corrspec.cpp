// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#include "widecorr/corrspec.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace widecorr {

namespace {

SlotPairing make_pairing(SlotRef a, SlotRef b)
{
    if (b < a) {
        std::swap(a, b);
    }
    return SlotPairing{a, b};
}

} // namespace

CorrelationSpec::CorrelationSpec(std::vector<DerivativeTensor> tensors,
                                 std::vector<SlotPairing> pairings)
    : tensors_(std::move(tensors)), pairings_(std::move(pairings))
{
    for (auto& p : pairings_) {
        p = make_pairing(p.first, p.second);
    }
    std::sort(pairings_.begin(), pairings_.end());

    // Every slot of every tensor must appear in exactly one pairing.
    std::map<SlotRef, int> seen;
    for (const auto& p : pairings_) {
        if (p.first == p.second) {
            throw std::invalid_argument("slot paired with itself");
        }
        for (const auto& ref : {p.first, p.second}) {
            if (ref.tensor < 0 || ref.tensor >= tensor_count()) {
                throw std::invalid_argument("pairing references tensor out of range");
            }
            if (ref.slot < 0 || ref.slot >= tensors_[ref.tensor].rank()) {
                throw std::invalid_argument("pairing references slot out of range");
            }
            if (++seen[ref] > 1) {
                throw std::invalid_argument("slot appears in more than one pairing");
            }
        }
    }
    for (int t = 0; t < tensor_count(); ++t) {
        if (tensors_[t].input_label.empty()) {
            throw std::invalid_argument("tensor with empty input label");
        }
        for (int s = 0; s < tensors_[t].rank(); ++s) {
            if (!seen.count(SlotRef{t, s})) {
                throw std::invalid_argument("unpaired derivative slot");
            }
        }
    }
}

int CorrelationSpec::total_slots() const
{
    int total = 0;
    for (const auto& t : tensors_) {
        total += t.rank();
    }
    return total;
}

std::vector<int> CorrelationSpec::ranks() const
{
    std::vector<int> r;
    r.reserve(tensors_.size());
    for (const auto& t : tensors_) {
        r.push_back(t.rank());
    }
    return r;
}

std::vector<std::string> CorrelationSpec::input_labels() const
{
    std::vector<std::string> labels;
    for (const auto& t : tensors_) {
        if (std::find(labels.begin(), labels.end(), t.input_label) == labels.end()) {
            labels.push_back(t.input_label);
        }
    }
    return labels;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    CorrelationSpec parse()
    {
        std::vector<DerivativeTensor> tensors;
        skip_ws();
        if (eof()) {
            throw SpecParseError("empty correlation spec", pos_);
        }
        tensors.push_back(factor());
        while (true) {
            skip_ws();
            if (eof()) {
                break;
            }
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            }
            tensors.push_back(factor());
        }
        return resolve(std::move(tensors));
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws()
    {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    void expect(char c)
    {
        if (eof() || peek() != c) {
            throw SpecParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    std::string identifier(const char* what)
    {
        if (eof() || !std::isalpha(static_cast<unsigned char>(peek()))) {
            throw SpecParseError(std::string("expected ") + what, pos_);
        }
        std::size_t start = pos_;
        while (!eof() && std::isalnum(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    DerivativeTensor factor()
    {
        skip_ws();
        if (eof() || peek() != 'f') {
            throw SpecParseError("expected factor 'f(label)'", pos_);
        }
        ++pos_;
        skip_ws();
        expect('(');
        skip_ws();
        DerivativeTensor tensor;
        tensor.input_label = identifier("input label");
        skip_ws();
        expect(')');
        skip_ws();
        if (!eof() && peek() == '[') {
            ++pos_;
            skip_ws();
            tensor.slot_names.push_back(identifier("index"));
            skip_ws();
            while (!eof() && peek() == ',') {
                ++pos_;
                skip_ws();
                tensor.slot_names.push_back(identifier("index"));
                skip_ws();
            }
            expect(']');
        }
        return tensor;
    }

    CorrelationSpec resolve(std::vector<DerivativeTensor> tensors)
    {
        std::map<std::string, std::vector<SlotRef>> uses;
        for (int t = 0; t < static_cast<int>(tensors.size()); ++t) {
            for (int s = 0; s < tensors[t].rank(); ++s) {
                uses[tensors[t].slot_names[s]].push_back(SlotRef{t, s});
            }
        }
        std::vector<SlotPairing> pairings;
        for (const auto& [name, refs] : uses) {
            if (refs.size() == 1) {
                throw SpecParseError("index '" + name + "' appears only once", pos_);
            }
            if (refs.size() > 2) {
                throw SpecParseError("index '" + name + "' appears " +
                                         std::to_string(refs.size()) + " times",
                                     pos_);
            }
            pairings.push_back(make_pairing(refs[0], refs[1]));
        }
        return CorrelationSpec(std::move(tensors), std::move(pairings));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

CorrelationSpec parse_spec(std::string_view text)
{
    return Parser(text).parse();
}

std::string render(const CorrelationSpec& spec)
{
    std::ostringstream out;
    for (int t = 0; t < spec.tensor_count(); ++t) {
        if (t > 0) {
            out << " ";
        }
        const auto& tensor = spec.tensors()[t];
        out << "f(" << tensor.input_label << ")";
        if (tensor.rank() > 0) {
            out << "[";
            for (int s = 0; s < tensor.rank(); ++s) {
                if (s > 0) {
                    out << ",";
                }
                out << tensor.slot_names[s];
            }
            out << "]";
        }
    }
    return out.str();
}

const std::vector<std::pair<std::string, CorrelationSpec>>& builtin_specs()
{
    static const std::vector<std::pair<std::string, CorrelationSpec>> specs = [] {
        std::vector<std::pair<std::string, CorrelationSpec>> v;
        v.emplace_back("C_{2,0}", parse_spec("f(x1) f(x2)"));
        v.emplace_back("C_{2,1}", parse_spec("f(x1)[mu1] f(x2)[mu1]"));
        v.emplace_back("C_{4,0}", parse_spec("f(x1) f(x2) f(x3) f(x4)"));
        v.emplace_back("C_{4,2}", parse_spec("f(x1)[mu1,mu2] f(x2)[mu1] f(x3)[mu2] f(x4)"));
        v.emplace_back("C_{4,3}", parse_spec("f(x1)[mu1,mu2,mu3] f(x2)[mu1] f(x3)[mu2] f(x4)[mu3]"));
        v.emplace_back("C_{6,4}",
                       parse_spec("f(x1)[mu1,mu2] f(x2)[mu1] f(x3)[mu2] "
                                  "f(x4)[mu3,mu4] f(x5)[mu3] f(x6)[mu4]"));
        return v;
    }();
    return specs;
}

std::optional<CorrelationSpec> find_builtin(std::string_view name)
{
    // Accept both "C_{4,2}" and the bare "C4,2" / "C42" spellings.
    auto normalize = [](std::string_view s) {
        std::string r;
        for (char c : s) {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                r += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
        }
        return r;
    };
    const std::string wanted = normalize(name);
    for (const auto& [builtin_name, spec] : builtin_specs()) {
        if (normalize(builtin_name) == wanted) {
            return spec;
        }
    }
    return std::nullopt;
}

CorrelationSpec resolve_spec(std::string_view name_or_text)
{
    if (auto builtin = find_builtin(name_or_text)) {
        return *builtin;
    }
    return parse_spec(name_or_text);
}

} // namespace widecorr
