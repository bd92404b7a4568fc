#include "fairplay/metrics/report.hpp"

#include <sstream>

#include "fairplay/core/story_io.hpp"

namespace fairplay::metrics {

namespace {

std::string opt(const std::optional<double>& v) {
    return v ? format_double(*v) : kUnavailable;
}

std::string flag(bool b) {
    return b ? "1" : "0";
}

double one_paragraph(std::size_t n) {
    return 1.0 / static_cast<double>(n) - 1e-12;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + csv_field(parts[i]);
    return s;
}

struct Mean {
    double total = 0.0;
    std::size_t count = 0;
    void add(double v) {
        total += v;
        ++count;
    }
    std::optional<double> value() const {
        if (count == 0) return std::nullopt;
        return total / static_cast<double>(count);
    }
};

}  // namespace

std::optional<FairPlay> MetricReport::fair_play() const {
    if (!surprise || !coherence) return std::nullopt;
    return fair_play_score(*surprise, *coherence, num_steps);
}

std::string metric_csv_header() {
    return "story,n,revelation,g_val,culprit_confidence,distractor_confidence,g_val_reasons,s_s,s_c,s_fp,"
           "s_fp_scaled,s_fp_ge_one_paragraph,erc_ar,erc_ar_scaled,erc_ar_ge_one_paragraph,erc_br,erc_br_scaled,"
           "erc_br_ge_one_paragraph,erc_exact,erc_ar_raw,erc_br_raw,erc_ar_records,erc_br_records,s_s_source,"
           "s_c_source,erc_source,samples_valid,samples_total";
}

std::string metric_csv_row(const MetricReport& r) {
    std::vector<std::string> f;
    f.push_back(r.story_id);
    f.push_back(std::to_string(r.num_steps));
    f.push_back(r.revelation_point ? std::to_string(*r.revelation_point) : kUnavailable);
    if (r.validity) {
        f.push_back(flag(r.validity->valid));
        f.push_back(format_double(r.validity->culprit_confidence));
        f.push_back(format_double(r.validity->distractor_confidence));
        std::string reasons;
        for (std::size_t i = 0; i < r.validity->reasons.size(); ++i)
            reasons += (i ? "; " : "") + r.validity->reasons[i];
        f.push_back(reasons);
    } else {
        f.insert(f.end(), {kUnavailable, kUnavailable, kUnavailable, ""});
    }
    f.push_back(opt(r.surprise));
    f.push_back(opt(r.coherence));
    if (const auto fp = r.fair_play()) {
        f.push_back(format_double(fp->value));
        f.push_back(format_double(fp->scaled));
        f.push_back(flag(fp->at_least_one_paragraph));
    } else {
        f.insert(f.end(), {kUnavailable, kUnavailable, kUnavailable});
    }
    for (const auto* e : {&r.erc_ar, &r.erc_br}) {
        if (*e && (*e)->records > 0) {
            f.push_back(format_double((*e)->excess));
            f.push_back(format_double((*e)->excess_scaled));
            f.push_back(flag((*e)->excess >= one_paragraph(r.num_steps)));
        } else {
            f.insert(f.end(), {kUnavailable, kUnavailable, kUnavailable});
        }
    }
    f.push_back(opt(r.erc_exact));
    for (const auto* e : {&r.erc_ar, &r.erc_br})
        f.push_back(*e && (*e)->records > 0 ? format_double((*e)->raw_accuracy) : kUnavailable);
    for (const auto* e : {&r.erc_ar, &r.erc_br}) f.push_back(*e ? std::to_string((*e)->records) : "0");
    f.push_back(r.surprise_source);
    f.push_back(r.coherence_source);
    f.push_back(r.erc_source);
    f.push_back(std::to_string(r.samples_valid));
    f.push_back(std::to_string(r.samples_total));
    return join(f);
}

CorpusSummary summarize(const std::string& label, const std::vector<MetricReport>& reports) {
    CorpusSummary s;
    s.label = label;
    s.stories = reports.size();
    Mean g, ss, sc, fp, fp_ratio, ar, br, ar_ratio, br_ratio;
    for (const auto& r : reports) {
        if (r.validity) g.add(r.validity->valid ? 1.0 : 0.0);
        if (!r.counts_toward_means()) continue;
        ++s.valid_stories;
        if (r.surprise) ss.add(*r.surprise);
        if (r.coherence) sc.add(*r.coherence);
        if (const auto f = r.fair_play()) {
            fp.add(f->value);
            fp_ratio.add(f->at_least_one_paragraph ? 1.0 : 0.0);
        }
        if (r.erc_ar && r.erc_ar->records > 0) {
            ar.add(r.erc_ar->excess_scaled);
            ar_ratio.add(r.erc_ar->excess >= one_paragraph(r.num_steps) ? 1.0 : 0.0);
        }
        if (r.erc_br && r.erc_br->records > 0) {
            br.add(r.erc_br->excess_scaled);
            br_ratio.add(r.erc_br->excess >= one_paragraph(r.num_steps) ? 1.0 : 0.0);
        }
    }
    s.g_val = g.value();
    s.surprise = ss.value();
    s.coherence = sc.value();
    s.fair_play = fp.value();
    s.fair_play_ratio = fp_ratio.value();
    s.erc_ar_scaled = ar.value();
    s.erc_br_scaled = br.value();
    s.erc_ar_ratio = ar_ratio.value();
    s.erc_br_ratio = br_ratio.value();
    return s;
}

std::string summary_csv_header() {
    return "label,stories,valid_stories,g_val,s_s,s_c,s_fp,s_fp_ge_one_paragraph,erc_ar_scaled,erc_br_scaled,"
           "erc_ar_ge_one_paragraph,erc_br_ge_one_paragraph";
}

std::string summary_csv_row(const CorpusSummary& s) {
    return join({s.label, std::to_string(s.stories), std::to_string(s.valid_stories), opt(s.g_val), opt(s.surprise),
                 opt(s.coherence), opt(s.fair_play), opt(s.fair_play_ratio), opt(s.erc_ar_scaled),
                 opt(s.erc_br_scaled), opt(s.erc_ar_ratio), opt(s.erc_br_ratio)});
}

}  // namespace fairplay::metrics
