#!/usr/bin/env python3
"""Regenerate the Turkish stemmer golden list.

Inflects a fixed set of roots with vowel-harmonized suffix chains, samples
1000 distinct forms with a fixed seed and records the stems produced by the
reference Snowball implementation (pip package `snowballstemmer`).

    python3 scripts/gen_stem_golden.py > crates/core/tests/data/stem_golden.tsv
"""
import random

import snowballstemmer

ROOTS = """
okul ev kitap göz yol kız çocuk adam kadın şehir ülke insan millet halk devlet
parti seçim oy sandık başkan bakan meclis hükümet muhalefet lider ses haber
gazete televizyon söz dil yazı soru cevap gün yıl ay hafta saat zaman dünya
iş para ekonomi vergi fiyat pazar köy kasaba sokak bahçe kapı pencere masa
kalem defter öğretmen öğrenci doktor asker polis hakim avukat işçi memur
köprü yurt toprak deniz dağ ağaç çiçek kuş balık kedi köpek at araba otobüs
tren uçak gemi hava su ateş güneş yıldız gece sabah akşam umut korku sevgi
barış savaş zafer hak adalet özgürlük demokrasi anayasa kanun karar rapor
proje plan hedef sonuç başarı hata sorun çözüm fikir düşünce duygu hayat
ölüm sağlık hastane ilaç yemek ekmek çay kahve süt et meyve sebze
""".split()

VERBS = """
gel git yap söyle bil gör al ver oku yaz konuş dinle çalış sev bekle anla
düşün başla bitir kazan kaybet seç destekle eleştir koru yönet kur
""".split()

FRONT = set("eiöü")
VOWELS = set("aeıioöuü")


def last_vowel(w):
    for c in reversed(w):
        if c in VOWELS:
            return c
    return "a"


def two_way(w, back, front):
    return front if last_vowel(w) in FRONT else back


def four_way(w, forms):
    # forms for (a/ı) (e/i) (o/u) (ö/ü)
    v = last_vowel(w)
    return forms[{"a": 0, "ı": 0, "e": 1, "i": 1, "o": 2, "u": 2, "ö": 3, "ü": 3}[v]]


def ends_vowel(w):
    return w[-1] in VOWELS


def plural(w):
    return w + two_way(w, "lar", "ler")


def poss1pl(w):
    s = four_way(w, ["ımız", "imiz", "umuz", "ümüz"])
    return w + (s[1:] if ends_vowel(w) else s)


def poss3(w):
    s = four_way(w, ["ı", "i", "u", "ü"])
    return w + ("s" + s if ends_vowel(w) else s)


def poss2(w):
    s = four_way(w, ["ın", "in", "un", "ün"])
    return w + (s[1:] if ends_vowel(w) else s)


def case_abl(w):
    hard = w[-1] in "çfhkpsşt"
    return w + ("t" if hard else "d") + two_way(w, "an", "en")


def case_loc(w):
    hard = w[-1] in "çfhkpsşt"
    return w + ("t" if hard else "d") + two_way(w, "a", "e")


def case_dat(w):
    return w + ("y" if ends_vowel(w) else "") + two_way(w, "a", "e")


def case_acc(w):
    return w + ("y" if ends_vowel(w) else "") + four_way(w, ["ı", "i", "u", "ü"])


def case_gen(w):
    return w + ("n" if ends_vowel(w) else "") + four_way(w, ["ın", "in", "un", "ün"])


def with_(w):
    return w + ("y" if ends_vowel(w) else "") + two_way(w, "la", "le")


def ki(w):
    return w + "ki"


def copula(w):
    return w + ("y" if ends_vowel(w) else "") + four_way(w, ["ız", "iz", "uz", "üz"])


NOUN_STEPS = [
    [lambda w: w, plural],
    [lambda w: w, poss1pl, poss3, poss2],
    [lambda w: w, case_abl, case_loc, case_dat, case_acc, case_gen, with_],
    [lambda w: w, ki, copula],
]


def verb_forms(v):
    out = []
    harm = two_way(v, "a", "e")
    i4 = four_way(v, ["ı", "i", "u", "ü"])
    if ends_vowel(v):
        base = v[:-1]
        out.append(base + four_way(base, ["ı", "i", "u", "ü"]) + "yor")
    else:
        out.append(v + i4 + "yor")
    out.append(v + ("m" + harm + "k"))
    out.append(v + ("t" if v[-1] in "çfhkpsşt" else "d") + i4)
    out.append(v + "m" + harm + "l" + i4)
    out.append(v + ("y" if ends_vowel(v) else "") + harm + "c" + harm + "k")
    out.append(v + "m" + harm + "d" + i4 + "m")
    out.append(v + "m" + harm + "k" + "t" + harm + "n")
    return out


def main():
    forms = set()
    for r in ROOTS:
        for a in NOUN_STEPS[0]:
            for b in NOUN_STEPS[1]:
                for c in NOUN_STEPS[2]:
                    for d in NOUN_STEPS[3]:
                        forms.add(d(c(b(a(r)))))
    for v in VERBS:
        forms.update(verb_forms(v))
    forms = sorted(forms)
    rng = random.Random(20240101)
    sample = set(rng.sample(forms, 995))
    for must in ["okullarımızdan", "evlerimizden", "kitaplarımızı", "gözlerinden", "çocukların"]:
        sample.add(must)
    sample = sorted(sample)[:1000] if len(sample) > 1000 else sorted(sample)
    while len(sample) < 1000:
        sample.append(rng.choice([f for f in forms if f not in sample]))
        sample = sorted(set(sample))
    stemmer = snowballstemmer.stemmer("turkish")
    print("# word\tstem")
    for w in sample:
        print(f"{w}\t{stemmer.stemWord(w)}")


if __name__ == "__main__":
    main()
