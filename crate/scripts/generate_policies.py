"""Generate the synthetic policy pages served by `praf fetch --replay`.

Each page is assembled from sentence banks so that its content matches the
app's row marks: a filled mark gets an explicit statement, a dash gets no
mention at all. Hedged sentences are added at a density inside the partial
band (0.15 to 0.35) for apps marked partial on ambiguous language and below
0.15 otherwise. One or two generic security assurances are added for apps
marked partial on vague commitments.

A24 is recorded as a 404. A13 is served as text/plain.

Writes fixtures/responses/*.html|*.txt, robots.txt and manifest.json.
"""
import json
import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))
from transcribe_results import ROWS  # noqa: E402

ROOT = os.path.join(os.path.dirname(__file__), "..")
OUT = os.path.join(ROOT, "fixtures", "responses")
HOST = "https://policies.example.org"

BANKS = {
    "hipaa": [
        "We handle protected health information in accordance with the Health Insurance Portability and Accountability Act (HIPAA).",
        "As a covered service, we follow HIPAA requirements for your health records.",
    ],
    "gdpr": [
        "If you live in Europe, we process personal data in line with the General Data Protection Regulation (GDPR).",
        "Users in the European Union have rights under the GDPR, including the right to request deletion of their data.",
    ],
    "other": [
        "California residents have additional rights under the California Consumer Privacy Act (CCPA).",
        "Canadian users are protected by the Personal Information Protection and Electronic Documents Act (PIPEDA).",
        "We comply with the Children's Online Privacy Protection Act (COPPA) and do not knowingly collect information from children.",
    ],
    "minimization": [
        "We only collect the information needed to provide the service.",
        "We collect only the details that are necessary to set up your care plan.",
        "Data minimization guides our design, so optional fields are never required.",
    ],
    "encryption": [
        "All health records are encrypted at rest and in transit using TLS.",
        "Messages between you and your care team are protected with end-to-end encryption.",
        "Stored files are encrypted with AES-256.",
    ],
    "access": [
        "Access to your records is restricted to authorized staff who need it to support you.",
        "We use role-based access controls so that employees see only what their job requires.",
        "Only authorized personnel can view account details, and every login requires two-factor authentication.",
    ],
    "consent": [
        "We will ask for your consent before we use your health information for any new purpose.",
        "You can withdraw your consent at any time in the settings screen.",
        "We never send marketing messages without your consent.",
    ],
    "retention": [
        "We keep activity logs for 90 days and then delete them.",
        "After you close your account, we retain your profile for 2 years before permanent deletion.",
        "Appointment history is stored for 6 years to meet medical record rules.",
    ],
    "breach": [
        "If a data breach affects your information, we will notify you within 72 hours.",
        "In the event of a security breach, we will notify affected users and the relevant authorities without delay.",
    ],
    "third_party": [
        "We share limited data with third parties that host our servers and process payments.",
        "We disclose usage statistics to third parties that help us analyze the service.",
        "Third-party partners such as pharmacies receive your details only when you ask us to send a prescription.",
    ],
    "hedge": [
        "Some features might not be available in every region.",
        "We may send you reminders about upcoming appointments.",
        "Your experience may vary depending on your device.",
        "We may change these terms from time to time.",
        "We may contact you about new features of the app.",
        "Settings might reset after a major update.",
        "We may review support requests as appropriate.",
        "We reserve the right to suspend accounts that break our terms.",
        "Response times may be longer on public holidays.",
        "The app might ask you to sign in again after an update.",
        "We may add new languages to the app in future releases.",
        "Notifications may be delayed when your phone is offline.",
    ],
    "vague": [
        "We take reasonable measures to protect your information.",
        "We use industry-standard safeguards to keep your details safe.",
        "We are committed to protecting your privacy.",
    ],
    "filler": [
        "This policy explains how the app handles the information you provide.",
        "We collect your name, email address and date of birth when you register.",
        "We use your information to schedule visits and send reminders.",
        "You can update your profile details in the settings screen.",
        "Location information is used to show nearby clinics.",
        "Health readings you enter are shown in your personal dashboard.",
        "Family members can be invited to view your care calendar.",
        "Please contact our support team with questions about this policy.",
        "We use cookies to remember your language preference.",
        "The app is intended for adults who manage their own care or the care of a relative.",
        "Payment details are handled when you book a paid session.",
        "You can request a copy of the information we hold about you.",
        "We update this policy when our practices change and post the new date at the top.",
        "Questions can also be sent by mail to our privacy office.",
    ],
}

# Quoted sentences that must appear verbatim in specific apps.
FIXED = {
    "A3": {"minimization": "We limit the collection of personal information to what you choose to submit through the use of our services."},
    "A7": {"encryption": "Any payment transactions will be encrypted using SSL."},
    "A19": {"retention": "After your last visit we retain your records for 5 years."},
}

SECTIONS = [
    ("Information We Collect", ["minimization", "consent"]),
    ("How We Use and Share Information", ["third_party"]),
    ("Keeping Your Information Safe", ["encryption", "access", "breach", "vague"]),
    ("Keeping Records", ["retention"]),
    ("Laws That Apply", ["hipaa", "gdpr", "other"]),
]

PRINCIPLES = ["minimization", "encryption", "access", "consent", "retention", "breach"]


def parse_rows():
    rows = []
    for line in ROWS.strip().splitlines():
        parts = line.split()
        app, regs, principles, limits = parts[0], parts[2], parts[3], parts[4]
        marks = {"hipaa": regs[0], "gdpr": regs[1], "other": regs[2]}
        marks.update(zip(PRINCIPLES, principles))
        marks.update(zip(["ambiguous", "vague", "accessibility", "third_party"], limits))
        rows.append((app, marks))
    return rows


def build(app, marks):
    rng = random.Random(int(app[1:]))
    fixed = FIXED.get(app, {})

    def pick(key):
        return fixed.get(key) or rng.choice(BANKS[key])

    filler = rng.sample(BANKS["filler"], len(BANKS["filler"]))
    sections = [("Privacy Policy", [filler.pop() for _ in range(3)])]
    body_count = 3
    for title, keys in SECTIONS:
        sentences = []
        for key in keys:
            if key == "vague":
                if marks["vague"] == "P":
                    sentences.extend(rng.sample(BANKS["vague"], rng.choice([1, 2])))
            elif marks[key] == "Y":
                sentences.append(pick(key))
        sentences.extend(filler.pop() for _ in range(2))
        sections.append((title, sentences))
        body_count += len(sentences)
    headings = len(sections)
    base = body_count + headings
    if marks["ambiguous"] == "P":
        hedges = round(base / 3)
    else:
        hedges = 1 if base >= 10 and int(app[1:]) % 3 == 0 else 0
    assert hedges <= len(BANKS["hedge"])
    chosen = rng.sample(BANKS["hedge"], hedges)
    for i, h in enumerate(chosen):
        sections[1 + i % (len(sections) - 1)][1].append(h)
    density = hedges / (base + hedges)
    if marks["ambiguous"] == "P":
        assert 0.15 <= density < 0.35, (app, density)
    else:
        assert density < 0.15, (app, density)
    return sections


def to_html(sections):
    out = [
        "<!DOCTYPE html>",
        "<html lang=\"en\">",
        "<head><meta charset=\"utf-8\"><title>Privacy Policy</title>",
        "<style>body { font-family: sans-serif; }</style>",
        "<script>window.analytics = window.analytics || [];</script></head>",
        "<body>",
        "<header><nav><a href=\"/\">Home</a> <a href=\"/help\">Help</a> <a href=\"/terms\">Terms</a></nav></header>",
        "<main>",
    ]
    for i, (title, sentences) in enumerate(sections):
        tag = "h1" if i == 0 else "h2"
        out.append(f"<{tag}>{title}</{tag}>")
        for j in range(0, len(sentences), 2):
            out.append("<p>" + " ".join(sentences[j:j + 2]) + "</p>")
    out += [
        "</main>",
        "<div class=\"links\"><a href=\"/terms\">Terms of Service</a> | <a href=\"/cookies\">Cookie Settings</a></div>",
        "<footer><p>All rights reserved.</p></footer>",
        "</body>",
        "</html>",
        "",
    ]
    return "\n".join(out)


def to_text(sections):
    lines = []
    for title, sentences in sections:
        lines.append(title)
        lines.append(" ".join(sentences))
    return "\n".join(lines) + "\n"


def main():
    os.makedirs(OUT, exist_ok=True)
    manifest = {
        f"{HOST}/robots.txt": {"status": 200, "content_type": "text/plain", "file": "robots.txt"},
    }
    with open(os.path.join(OUT, "robots.txt"), "w") as f:
        f.write("User-agent: *\nDisallow: /admin/\n")
    for app, marks in parse_rows():
        url = f"{HOST}/{app.lower()}/privacy"
        if app == "A24":
            manifest[url] = {"status": 404, "content_type": "text/html"}
            continue
        sections = build(app, marks)
        if app == "A13":
            name, body, ctype = f"{app.lower()}.txt", to_text(sections), "text/plain; charset=utf-8"
        else:
            name, body, ctype = f"{app.lower()}.html", to_html(sections), "text/html; charset=utf-8"
        with open(os.path.join(OUT, name), "w") as f:
            f.write(body)
        manifest[url] = {"status": 200, "content_type": ctype, "file": name}
    with open(os.path.join(OUT, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
