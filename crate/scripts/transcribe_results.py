"""Transcribe the published 28-app results table into the fixture files.

Writes:
  fixtures/codebook.json        codebook with one complete annotation set per app
  fixtures/expected_table.json transcribed published values used by `praf verify`

Mark legend: Y = filled bullet, P = open circle, N = dash.
Columns: regulation (HIPAA GDPR Others) | principles (minimization encryption
access consent retention breach) | limitations (ambiguous vague accessibility
third-party) | SMOG | level | regulatory security usability min/ret third-party overall.

Real names are fictional placeholders; the published study only discloses pseudonyms.
"""
import json
import os

ROWS = """
A1  telehealth                    YYN YYYYYY NNNY 13   VD  4 6 7 4 2 23
A2  telehealth                    NNY YYYYYN PNNY 13.2 VD  2 5 7 4 2 20
A3  senior_care_caregiver_support NNY YNYYYY PPNN 10.9 FD  2 5 7 4 1 19
A4  senior_care_caregiver_support NNY YNYYNN PPNY 14.2 P   2 4 4 3 2 15
A5  senior_care_caregiver_support NNY YNNNYN PNNY 13   VD  2 3 6 4 2 17
A6  senior_care_caregiver_support YNN NYYYNN NNNY 11.5 D   3 5 8 2 2 20
A7  senior_care_caregiver_support NNY YYYYYN NPNY 12.4 D   2 5 7 4 2 20
A8  senior_care_caregiver_support YNN NYYYNN NPNY 11.6 D   3 5 7 2 2 19
A9  senior_care_caregiver_support YNN YNYYYN NNNY 13.4 VD  3 4 7 4 2 20
A10 eldercare_wellbeing_support   NNY YYYYYY NNNY 12.8 VD  2 6 7 4 2 21
A11 eldercare_wellbeing_support   NNY YYYYYY NNNY 11.2 FD  2 6 9 4 2 23
A12 eldercare_wellbeing_support   NNY YYYYYN PNNY 14.4 P   2 5 5 4 2 18
A13 eldercare_wellbeing_support   NNN YNNYNN PNNY 10.9 FD  1 3 8 3 2 17
A14 eldercare_wellbeing_support   NNY YYYYNN PNNY 13.2 VD  2 5 6 3 2 18
A15 health_monitoring_safety      NNY YYYYYN NNNY 11.5 D   2 5 8 4 2 21
A16 health_monitoring_safety      NYN YYYYNN NNNY 13   VD  3 5 7 3 2 20
A17 health_monitoring_safety      YNN YNNYYN PNNY 12   D   3 3 7 4 2 19
A18 health_monitoring_safety      NYN YYYYNN NNNY 9.2  SD  3 5 11 3 2 24
A19 health_monitoring_safety      NNY YNYYYN PPNY 11.8 D   2 4 6 4 2 18
A20 health_monitoring_safety      YNN YNYYYY NNNY 11.6 D   3 5 8 4 2 22
A21 healthcare_services           YNN YYYYNN NNNY 12.9 VD  3 5 7 3 2 20
A22 healthcare_services           NNY NNYYNN PPNY 13.3 VD  2 4 5 2 2 15
A23 healthcare_services           NYN YYYYYY NNNY 10.6 FD  3 6 9 4 2 24
A24 fitness_support               NNN NNNNNN NNNN -    -   0 0 0 0 0 0
A25 fitness_support               NNN YNNYNN PPNY 9.1  SD  1 3 9 3 2 18
A26 fitness_support               NNN YNNYNN NPNY 9.6  SWD 1 3 9 3 2 18
A27 fitness_support               NYN YYYYYN PNNY 12.1 D   3 5 7 4 2 21
A28 fitness_support               NNN YYYYYN PPNY 11.4 FD  1 5 7 4 2 19
"""

NAMES = [
    "CareBridge Telehealth", "DocNow Senior Visits", "GoldenHands Caregiver",
    "FamilyCircle Care", "ElderAssist Planner", "CareTeam Connect",
    "HomeHelper Seniors", "Guardian Care Notes", "SilverAide", "WellAging Daily",
    "Evergreen Wellbeing", "SeniorJoy Companion", "Harbor Elder Life",
    "KinCare Wellness", "VitalWatch Senior", "HeartGuard Monitor",
    "FallSafe Alert", "PulseKeeper", "MedMinder Vitals", "SafeStep Monitor",
    "ClinicLink Seniors", "HealthPath Services", "CareQuest Medical",
    "ActiveYears Fitness", "StrongSenior Workouts", "BalanceBuddy",
    "SilverStride Fitness", "ChairFit Coach",
]

DIMS = [
    "hipaa_mention", "gdpr_mention", "other_regulation",
    "data_minimization", "data_encryption", "access_controls",
    "consent_requirements", "retention_time", "breach_protocol",
    "ambiguous_language", "vague_commitments", "accessibility_accommodations",
    "third_party_sharing",
]
VERDICT = {"Y": "yes", "P": "partial", "N": "no"}
STAMP = "2024-06-01T00:00:00Z"


def parse():
    out = []
    for line in ROWS.strip().splitlines():
        f = line.split()
        app, cat, reg, pri, lim, smog, level = f[:7]
        scores = [int(x) for x in f[7:]]
        marks = [VERDICT[c] for c in reg + pri + lim]
        out.append(dict(app=app, category=cat, marks=marks,
                        smog=None if smog == "-" else float(smog),
                        level=None if level == "-" else level,
                        scores=scores))
    return out


def url_for(app):
    return f"https://policies.example.org/{app.lower()}/privacy"


def main():
    root = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    rows = parse()
    records, annotations, expected = [], [], []
    for i, r in enumerate(rows):
        records.append(dict(pseudonym=r["app"], real_name=NAMES[i],
                            category=r["category"], policy_url=url_for(r["app"]),
                            store_source="other"))
        ann = dict(app=r["app"], overrides=dict(zip(DIMS, r["marks"])),
                   reviewer_note="transcribed from the published results table",
                   timestamp=STAMP)
        if r["smog"] is None:
            ann["policy_status"] = "inaccessible"
        else:
            ann["policy_status"] = "accessible"
            ann["smog_grade"] = r["smog"]
        annotations.append(ann)
        names = ["regulatory", "security", "usability", "min_retention",
                 "third_party", "overall"]
        expected.append(dict(app=r["app"], verdicts=dict(zip(DIMS, r["marks"])),
                             smog_grade=r["smog"], level=r["level"],
                             scores=dict(zip(names, r["scores"]))))
    with open(os.path.join(root, "codebook.json"), "w") as fh:
        json.dump(dict(records=records, annotations=annotations), fh, indent=2)
        fh.write("\n")
    waivers = [
        dict(app="A2", column="usability", published=7, rubric=6,
             note="row marks (VD, partial ambiguity, clear commitments, no accessibility) "
                  "give 2+1+2+1 = 6; the identical pattern at A5 is published as 6"),
        dict(app="A2", column="overall", published=20, rubric=19,
             note="follows from the usability cell: 2+5+6+4+2 = 19"),
    ]
    summary = dict(
        counts=dict(hipaa=7, gdpr=5, other_regulation=12, no_regulation=4,
                    encryption=16, access_controls=22, breach=6,
                    minimization=24, retention=16, third_party=26),
        means=dict(regulatory=2.21, security=4.46, usability=6.96,
                   min_retention=3.36, third_party=1.89, overall=18.89),
        sds=dict(security=1.27, usability=2.0, third_party=0.41),
        tolerance=dict(mean=0.05, sd=0.05, usability_sd=0.15),
        smog_mean=11.99, smog_tolerance=0.05,
        overall_min=dict(value=15, apps=["A4", "A22"]),
        overall_max=dict(value=24, apps=["A18", "A23"]),
    )
    with open(os.path.join(root, "expected_table.json"), "w") as fh:
        json.dump(dict(apps=expected, waivers=waivers, summary=summary), fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
