"""Freeze CMU Pronouncing Dictionary syllable counts for the syllable fixture.

Usage: python3 scripts/syllable_oracle.py > crates/core/tests/fixtures/syllables_cmudict.tsv
Requires the `cmudict` package. Counts are the number of stressed-vowel
phonemes in the first pronunciation listed for each word.
"""
import cmudict

WORDS = """
a data the we our you your use used using information personal privacy policy
policies encryption encrypted encrypt secure security securely access accessed
control controls consent consents collect collected collection collects share
shared sharing third party parties service services provider providers health
healthcare medical record records retain retained retention period store stored
storage delete deleted deletion breach breaches notify notified notification
notice minimize minimization necessary purpose purposes limit limited legal
law laws regulation regulations comply compliance federal state california
european economic area rights request requests account accounts password
passwords authentication authorized employee employees agent agents partner
partners advertising analytics cookie cookies device devices location browser
identify identifiable identifier anonymous aggregate aggregated transfer
transferred transmission transmit server servers protect protection protected
safeguard safeguards reasonable measures industry standard technical physical
administrative procedure procedures update updated change changes time email
contact address phone number children child age older adult adults senior
seniors caregiver caregivers family member members telehealth appointment
appointments doctor physician provide provided include including such other
may might will shall must also any all each these those which when where
application applications mobile website platform product products feature
features support request receive received review describe described practice
practices require required responsible response incident unauthorized
disclosure disclose disclosed portability accountability insurance
general insurance processing process processed controller processor
individual individuals apply applicable available
""".split()

def main():
    d = cmudict.dict()
    seen = set()
    out = []
    for w in WORDS:
        if w in seen:
            continue
        seen.add(w)
        prons = d.get(w)
        if not prons:
            continue
        n = sum(1 for p in prons[0] if p[-1].isdigit())
        out.append((w, n))
    out = out[:200]
    for w, n in out:
        print(f"{w}\t{n}")

if __name__ == "__main__":
    main()
