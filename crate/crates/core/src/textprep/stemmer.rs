//! Snowball Turkish stemmer.
//!
//! A direct port of the published Snowball `turkish.sbl` algorithm. The
//! routines keep their Snowball names so they can be checked side by side
//! against the algorithm definition. Everything runs on unicode scalar
//! values with a backward-moving cursor, like the Snowball runtime.

const VOWEL: &[char] = &['a', 'e', 'i', 'o', 'u', 'ö', 'ü', 'ı'];
const U: &[char] = &['i', 'u', 'ü', 'ı'];
const VOWEL1: &[char] = &['a', 'o', 'u', 'ı'];
const VOWEL2: &[char] = &['e', 'i', 'ö', 'ü'];
const VOWEL3: &[char] = &['a', 'ı'];
const VOWEL4: &[char] = &['e', 'i'];
const VOWEL5: &[char] = &['o', 'u'];
const VOWEL6: &[char] = &['ö', 'ü'];

const POSSESSIVES: &[&str] = &["m", "n", "miz", "niz", "muz", "nuz", "müz", "nüz", "mız", "nız"];
const LARI: &[&str] = &["leri", "ları"];
const NU: &[&str] = &["ni", "nu", "nü", "nı"];
const NUN: &[&str] = &["in", "un", "ün", "ın"];
const YA: &[&str] = &["a", "e"];
const NA: &[&str] = &["na", "ne"];
const DA: &[&str] = &["da", "ta", "de", "te"];
const NDA: &[&str] = &["nda", "nde"];
const DAN: &[&str] = &["dan", "tan", "den", "ten"];
const NDAN: &[&str] = &["ndan", "nden"];
const YLA: &[&str] = &["la", "le"];
const NCA: &[&str] = &["ca", "ce"];
const YUM: &[&str] = &["im", "um", "üm", "ım"];
const SUN: &[&str] = &["sin", "sun", "sün", "sın"];
const YUZ: &[&str] = &["iz", "uz", "üz", "ız"];
const SUNUZ: &[&str] = &["siniz", "sunuz", "sünüz", "sınız"];
const LAR: &[&str] = &["lar", "ler"];
const NUZ: &[&str] = &["niz", "nuz", "nüz", "nız"];
const DUR: &[&str] = &["dir", "tir", "dur", "tur", "dür", "tür", "dır", "tır"];
const CASINA: &[&str] = &["casına", "cesine"];
const YDU: &[&str] = &[
    "di", "ti", "dik", "tik", "duk", "tuk", "dük", "tük", "dık", "tık", "dim", "tim", "dum", "tum",
    "düm", "tüm", "dım", "tım", "din", "tin", "dun", "tun", "dün", "tün", "dın", "tın", "du", "tu",
    "dü", "tü", "dı", "tı",
];
const YSA: &[&str] = &["sa", "se", "sak", "sek", "sam", "sem", "san", "sen"];
const YMUS: &[&str] = &["miş", "muş", "müş", "mış"];
const LAST_CONSONANTS: &[(&str, &str)] = &[("b", "p"), ("c", "ç"), ("d", "t"), ("ğ", "k")];

/// Stem one lowercase Turkish word.
///
/// Words with fewer than two vowels are returned unchanged, as are the
/// reserved words `ad` and `soyad`.
pub fn stem(word: &str) -> String {
    if word.is_empty() {
        return String::new();
    }
    let mut env = Env::new(word);
    env.stem();
    env.current.into_iter().collect()
}

type Routine = fn(&mut Env) -> bool;

struct Env {
    current: Vec<char>,
    cursor: usize,
    limit: usize,
    limit_backward: usize,
    bra: usize,
    ket: usize,
    continue_stemming_noun_suffixes: bool,
}

impl Env {
    fn new(word: &str) -> Self {
        let current: Vec<char> = word.chars().collect();
        let limit = current.len();
        Env {
            current,
            cursor: 0,
            limit,
            limit_backward: 0,
            bra: 0,
            ket: limit,
            continue_stemming_noun_suffixes: false,
        }
    }

    // ---- runtime primitives -------------------------------------------

    /// Cursor position measured from the limit; stable across deletions
    /// that happen after the cursor.
    fn mark(&self) -> usize {
        self.limit - self.cursor
    }

    fn reset(&mut self, mark: usize) {
        self.cursor = self.limit - mark;
    }

    fn prev_char(&self) -> Option<char> {
        if self.cursor <= self.limit_backward {
            None
        } else {
            Some(self.current[self.cursor - 1])
        }
    }

    fn eq_c_b(&mut self, c: char) -> bool {
        if self.prev_char() == Some(c) {
            self.cursor -= 1;
            true
        } else {
            false
        }
    }

    fn eq_s_b(&mut self, s: &str) -> bool {
        let chars: Vec<char> = s.chars().collect();
        let n = chars.len();
        if self.cursor < self.limit_backward + n {
            return false;
        }
        if self.current[self.cursor - n..self.cursor] != chars[..] {
            return false;
        }
        self.cursor -= n;
        true
    }

    fn in_grouping_b(&mut self, group: &[char]) -> bool {
        match self.prev_char() {
            Some(c) if group.contains(&c) => {
                self.cursor -= 1;
                true
            }
            _ => false,
        }
    }

    fn out_grouping_b(&mut self, group: &[char]) -> bool {
        match self.prev_char() {
            Some(c) if !group.contains(&c) => {
                self.cursor -= 1;
                true
            }
            _ => false,
        }
    }

    /// Move backward until the preceding character is in `group`.
    fn go_out_grouping_b(&mut self, group: &[char]) -> bool {
        while self.cursor > self.limit_backward {
            if group.contains(&self.current[self.cursor - 1]) {
                return true;
            }
            self.cursor -= 1;
        }
        false
    }

    fn go_out_grouping(&mut self, group: &[char]) -> bool {
        while self.cursor < self.limit {
            if group.contains(&self.current[self.cursor]) {
                return true;
            }
            self.cursor += 1;
        }
        false
    }

    /// Backward among-search. None of the tables used here contain an
    /// entry that is a suffix of another, so at most one entry can match.
    /// Returns the 1-based entry index, or 0.
    fn find_among_b(&mut self, table: &[&str]) -> usize {
        for (i, s) in table.iter().enumerate() {
            let start = self.cursor;
            if self.eq_s_b(s) {
                return i + 1;
            }
            self.cursor = start;
        }
        0
    }

    fn replace_s(&mut self, c_bra: usize, c_ket: usize, s: &[char]) {
        let adjustment = s.len() as isize - (c_ket - c_bra) as isize;
        self.current.splice(c_bra..c_ket, s.iter().copied());
        self.limit = (self.limit as isize + adjustment) as usize;
        if self.cursor >= c_ket {
            self.cursor = (self.cursor as isize + adjustment) as usize;
        } else if self.cursor > c_bra {
            self.cursor = c_bra;
        }
    }

    fn slice_from(&mut self, s: &str) {
        let chars: Vec<char> = s.chars().collect();
        debug_assert!(self.bra <= self.ket && self.ket <= self.limit);
        self.replace_s(self.bra, self.ket, &chars);
        self.ket = self.bra + chars.len();
    }

    fn slice_del(&mut self) {
        self.slice_from("");
    }

    /// Snowball `or`: try each alternative from the same starting point.
    fn any_of(&mut self, alternatives: &[Routine]) -> bool {
        let m = self.mark();
        for alt in alternatives {
            self.reset(m);
            if alt(self) {
                return true;
            }
        }
        false
    }

    /// Snowball `try`: run `f`, restoring the cursor when it fails.
    fn attempt(&mut self, f: impl FnOnce(&mut Env) -> bool) {
        let m = self.mark();
        if !f(self) {
            self.reset(m);
        }
    }

    fn set_ket(&mut self) {
        self.ket = self.cursor;
    }

    /// `]` followed by `delete`.
    fn cut(&mut self) {
        self.bra = self.cursor;
        self.slice_del();
    }

    // ---- conditions ------------------------------------------------------

    fn check_vowel_harmony(&mut self) -> bool {
        let m = self.mark();
        if !self.go_out_grouping_b(VOWEL) {
            return false;
        }
        let pairs: [(char, &[char]); 8] = [
            ('a', VOWEL1),
            ('e', VOWEL2),
            ('ı', VOWEL3),
            ('i', VOWEL4),
            ('o', VOWEL5),
            ('ö', VOWEL6),
            ('u', VOWEL5),
            ('ü', VOWEL6),
        ];
        let inner = self.mark();
        let mut ok = false;
        for (last, previous) in pairs {
            self.reset(inner);
            if self.eq_c_b(last) && self.go_out_grouping_b(previous) {
                ok = true;
                break;
            }
        }
        if !ok {
            return false;
        }
        self.reset(m);
        true
    }

    fn mark_suffix_with_optional_consonant(&mut self, consonant: char) -> bool {
        let m = self.mark();
        if self.eq_c_b(consonant) {
            let m2 = self.mark();
            if self.in_grouping_b(VOWEL) {
                self.reset(m2);
                return true;
            }
        }
        self.reset(m);
        if self.eq_c_b(consonant) {
            return false;
        }
        let m3 = self.mark();
        if self.cursor <= self.limit_backward {
            return false;
        }
        self.cursor -= 1;
        if !self.in_grouping_b(VOWEL) {
            return false;
        }
        self.reset(m3);
        true
    }

    fn mark_suffix_with_optional_u_vowel(&mut self) -> bool {
        let m = self.mark();
        if self.in_grouping_b(U) {
            let m2 = self.mark();
            if self.out_grouping_b(VOWEL) {
                self.reset(m2);
                return true;
            }
        }
        self.reset(m);
        if self.in_grouping_b(U) {
            return false;
        }
        let m3 = self.mark();
        if self.cursor <= self.limit_backward {
            return false;
        }
        self.cursor -= 1;
        if !self.out_grouping_b(VOWEL) {
            return false;
        }
        self.reset(m3);
        true
    }

    fn harmonic_among(&mut self, table: &[&str]) -> bool {
        self.check_vowel_harmony() && self.find_among_b(table) != 0
    }

    fn mark_possessives(&mut self) -> bool {
        self.find_among_b(POSSESSIVES) != 0 && self.mark_suffix_with_optional_u_vowel()
    }

    fn mark_s_u(&mut self) -> bool {
        self.check_vowel_harmony()
            && self.in_grouping_b(U)
            && self.mark_suffix_with_optional_consonant('s')
    }

    fn mark_lari(&mut self) -> bool {
        self.find_among_b(LARI) != 0
    }

    fn mark_y_u(&mut self) -> bool {
        self.check_vowel_harmony()
            && self.in_grouping_b(U)
            && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_n_u(&mut self) -> bool {
        self.harmonic_among(NU)
    }

    fn mark_n_un(&mut self) -> bool {
        self.harmonic_among(NUN) && self.mark_suffix_with_optional_consonant('n')
    }

    fn mark_y_a(&mut self) -> bool {
        self.harmonic_among(YA) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_n_a(&mut self) -> bool {
        self.harmonic_among(NA)
    }

    fn mark_d_a(&mut self) -> bool {
        self.harmonic_among(DA)
    }

    fn mark_nd_a(&mut self) -> bool {
        self.harmonic_among(NDA)
    }

    fn mark_d_an(&mut self) -> bool {
        self.harmonic_among(DAN)
    }

    fn mark_nd_an(&mut self) -> bool {
        self.harmonic_among(NDAN)
    }

    fn mark_yl_a(&mut self) -> bool {
        self.harmonic_among(YLA) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_nc_a(&mut self) -> bool {
        self.harmonic_among(NCA) && self.mark_suffix_with_optional_consonant('n')
    }

    fn mark_y_um(&mut self) -> bool {
        self.harmonic_among(YUM) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_s_un(&mut self) -> bool {
        self.harmonic_among(SUN)
    }

    fn mark_y_uz(&mut self) -> bool {
        self.harmonic_among(YUZ) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_s_un_uz(&mut self) -> bool {
        self.find_among_b(SUNUZ) != 0
    }

    fn mark_l_ar(&mut self) -> bool {
        self.harmonic_among(LAR)
    }

    fn mark_n_uz(&mut self) -> bool {
        self.harmonic_among(NUZ)
    }

    fn mark_d_ur(&mut self) -> bool {
        self.harmonic_among(DUR)
    }

    fn mark_c_as_in_a(&mut self) -> bool {
        self.find_among_b(CASINA) != 0
    }

    fn mark_y_du(&mut self) -> bool {
        self.harmonic_among(YDU) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_ys_a(&mut self) -> bool {
        self.find_among_b(YSA) != 0 && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_ym_us(&mut self) -> bool {
        self.harmonic_among(YMUS) && self.mark_suffix_with_optional_consonant('y')
    }

    fn mark_yken(&mut self) -> bool {
        self.eq_s_b("ken") && self.mark_suffix_with_optional_consonant('y')
    }

    // ---- suffix chains ---------------------------------------------------

    fn stem_nominal_verb_suffixes(&mut self) -> bool {
        self.set_ket();
        self.continue_stemming_noun_suffixes = true;
        let m = self.mark();
        let matched = 'alts: {
            if self.any_of(&[Env::mark_ym_us, Env::mark_y_du, Env::mark_ys_a, Env::mark_yken]) {
                break 'alts true;
            }
            self.reset(m);
            if self.mark_c_as_in_a() {
                let optional = [
                    Env::mark_s_un_uz,
                    Env::mark_l_ar,
                    Env::mark_y_um,
                    Env::mark_s_un,
                    Env::mark_y_uz,
                ];
                let m3 = self.mark();
                if !self.any_of(&optional) {
                    self.reset(m3);
                }
                if self.mark_ym_us() {
                    break 'alts true;
                }
            }
            self.reset(m);
            if self.mark_l_ar() {
                self.cut();
                let m4 = self.mark();
                self.set_ket();
                if !self.any_of(&[Env::mark_d_ur, Env::mark_y_du, Env::mark_ys_a, Env::mark_ym_us]) {
                    self.reset(m4);
                }
                self.continue_stemming_noun_suffixes = false;
                break 'alts true;
            }
            self.reset(m);
            if self.mark_n_uz() && self.any_of(&[Env::mark_y_du, Env::mark_ys_a]) {
                break 'alts true;
            }
            self.reset(m);
            if self.any_of(&[Env::mark_s_un_uz, Env::mark_y_uz, Env::mark_s_un, Env::mark_y_um]) {
                self.cut();
                let m8 = self.mark();
                self.set_ket();
                if !self.mark_ym_us() {
                    self.reset(m8);
                }
                break 'alts true;
            }
            self.reset(m);
            if !self.mark_d_ur() {
                break 'alts false;
            }
            self.cut();
            let m9 = self.mark();
            self.set_ket();
            let optional = [
                Env::mark_s_un_uz,
                Env::mark_l_ar,
                Env::mark_y_um,
                Env::mark_s_un,
                Env::mark_y_uz,
            ];
            let m10 = self.mark();
            if !self.any_of(&optional) {
                self.reset(m10);
            }
            if !self.mark_ym_us() {
                self.reset(m9);
            }
            true
        };
        if !matched {
            return false;
        }
        self.cut();
        true
    }

    /// `[lAr] delete stem_suffix_chain_before_ki`, restoring on failure.
    fn try_lar_then_ki(&mut self) {
        self.attempt(|e| {
            e.set_ket();
            if !e.mark_l_ar() {
                return false;
            }
            e.cut();
            e.stem_suffix_chain_before_ki()
        });
    }

    fn possessives_or_su(&mut self) -> bool {
        self.any_of(&[Env::mark_possessives, Env::mark_s_u])
    }

    fn stem_suffix_chain_before_ki(&mut self) -> bool {
        self.set_ket();
        if !self.eq_s_b("ki") {
            return false;
        }
        let m = self.mark();

        if self.mark_d_a() {
            self.cut();
            let m2 = self.mark();
            self.set_ket();
            let m3 = self.mark();
            if self.mark_l_ar() {
                self.cut();
                self.attempt(Env::stem_suffix_chain_before_ki);
            } else {
                self.reset(m3);
                if self.mark_possessives() {
                    self.cut();
                    self.try_lar_then_ki();
                } else {
                    self.reset(m2);
                }
            }
            return true;
        }

        self.reset(m);
        if self.mark_n_un() {
            self.cut();
            let m6 = self.mark();
            self.set_ket();
            let m7 = self.mark();
            if self.mark_lari() {
                self.cut();
                return true;
            }
            self.reset(m7);
            self.set_ket();
            if self.possessives_or_su() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m7);
            if !self.stem_suffix_chain_before_ki() {
                self.reset(m6);
            }
            return true;
        }

        self.reset(m);
        if !self.mark_nd_a() {
            return false;
        }
        let m10 = self.mark();
        if self.mark_lari() {
            self.cut();
            return true;
        }
        self.reset(m10);
        if self.mark_s_u() {
            self.cut();
            self.try_lar_then_ki();
            return true;
        }
        self.reset(m10);
        self.stem_suffix_chain_before_ki()
    }

    fn stem_noun_suffixes(&mut self) -> bool {
        let m = self.mark();

        // lAr
        self.set_ket();
        if self.mark_l_ar() {
            self.cut();
            self.attempt(Env::stem_suffix_chain_before_ki);
            return true;
        }

        // ncA
        self.reset(m);
        self.set_ket();
        if self.mark_nc_a() {
            self.cut();
            let m3 = self.mark();
            self.set_ket();
            if self.mark_lari() {
                self.cut();
                return true;
            }
            self.reset(m3);
            self.set_ket();
            if self.possessives_or_su() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m3);
            self.set_ket();
            if !(self.mark_l_ar() && {
                self.cut();
                self.stem_suffix_chain_before_ki()
            }) {
                self.reset(m3);
            }
            return true;
        }

        // ndA / nA
        self.reset(m);
        self.set_ket();
        if self.any_of(&[Env::mark_nd_a, Env::mark_n_a]) {
            let m8 = self.mark();
            if self.mark_lari() {
                self.cut();
                return true;
            }
            self.reset(m8);
            if self.mark_s_u() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m8);
            if self.stem_suffix_chain_before_ki() {
                return true;
            }
        }

        // ndAn / nU
        self.reset(m);
        self.set_ket();
        if self.any_of(&[Env::mark_nd_an, Env::mark_n_u]) {
            let m11 = self.mark();
            if self.mark_s_u() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m11);
            // lArI is only checked here, not deleted.
            if self.mark_lari() {
                return true;
            }
        }

        // DAn
        self.reset(m);
        self.set_ket();
        if self.mark_d_an() {
            self.cut();
            let m13 = self.mark();
            self.set_ket();
            let m14 = self.mark();
            if self.mark_possessives() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m14);
            if self.mark_l_ar() {
                self.cut();
                self.attempt(Env::stem_suffix_chain_before_ki);
                return true;
            }
            self.reset(m14);
            if !self.stem_suffix_chain_before_ki() {
                self.reset(m13);
            }
            return true;
        }

        // nUn / ylA
        self.reset(m);
        self.set_ket();
        if self.any_of(&[Env::mark_n_un, Env::mark_yl_a]) {
            self.cut();
            let m18 = self.mark();
            self.set_ket();
            if self.mark_l_ar() && {
                self.cut();
                self.stem_suffix_chain_before_ki()
            } {
                return true;
            }
            self.reset(m18);
            self.set_ket();
            if self.possessives_or_su() {
                self.cut();
                self.try_lar_then_ki();
                return true;
            }
            self.reset(m18);
            if !self.stem_suffix_chain_before_ki() {
                self.reset(m18);
            }
            return true;
        }

        // lArI
        self.reset(m);
        self.set_ket();
        if self.mark_lari() {
            self.cut();
            return true;
        }

        // chain before -ki
        self.reset(m);
        if self.stem_suffix_chain_before_ki() {
            return true;
        }

        // DA / yU / yA
        self.reset(m);
        self.set_ket();
        if self.any_of(&[Env::mark_d_a, Env::mark_y_u, Env::mark_y_a]) {
            self.cut();
            let m23 = self.mark();
            self.set_ket();
            let m24 = self.mark();
            let continued = if self.mark_possessives() {
                self.cut();
                let m25 = self.mark();
                self.set_ket();
                if !self.mark_l_ar() {
                    self.reset(m25);
                }
                true
            } else {
                self.reset(m24);
                self.mark_l_ar()
            };
            if continued {
                self.cut();
                self.set_ket();
                if !self.stem_suffix_chain_before_ki() {
                    self.reset(m23);
                }
            } else {
                self.reset(m23);
            }
            return true;
        }

        // possessives / sU
        self.reset(m);
        self.set_ket();
        if !self.possessives_or_su() {
            return false;
        }
        self.cut();
        self.try_lar_then_ki();
        true
    }

    // ---- postlude --------------------------------------------------------

    fn post_process_last_consonants(&mut self) -> bool {
        self.set_ket();
        for (from, to) in LAST_CONSONANTS {
            let start = self.cursor;
            if self.eq_s_b(from) {
                self.bra = self.cursor;
                self.slice_from(to);
                return true;
            }
            self.cursor = start;
        }
        false
    }

    fn append_u_to_stems_ending_with_d_or_g(&mut self) -> bool {
        self.ket = self.cursor;
        self.bra = self.cursor;
        if !(self.eq_c_b('d') || self.eq_c_b('g')) {
            return false;
        }
        if !self.go_out_grouping_b(VOWEL) {
            return false;
        }
        let appended: [(char, char, &str); 4] =
            [('a', 'ı', "ı"), ('e', 'i', "i"), ('o', 'u', "u"), ('ö', 'ü', "ü")];
        let m = self.mark();
        for (first, second, append) in appended {
            self.reset(m);
            if self.eq_c_b(first) || self.eq_c_b(second) {
                self.slice_from(append);
                return true;
            }
        }
        false
    }

    fn is_reserved_word(&mut self) -> bool {
        if !self.eq_s_b("ad") {
            return false;
        }
        let m = self.mark();
        if !self.eq_s_b("soy") {
            self.reset(m);
        }
        self.cursor <= self.limit_backward
    }

    fn remove_proper_noun_suffix(&mut self) {
        // Leading apostrophes.
        let start = self.cursor;
        self.bra = self.cursor;
        while self.cursor < self.limit && self.current[self.cursor] == '\'' {
            self.cursor += 1;
        }
        self.ket = self.cursor;
        self.slice_del();
        self.cursor = start;

        // Everything from an apostrophe at position >= 2.
        let start = self.cursor;
        if self.cursor + 2 <= self.limit {
            self.cursor += 2;
            while self.cursor < self.limit && self.current[self.cursor] != '\'' {
                self.cursor += 1;
            }
            if self.cursor < self.limit {
                self.bra = self.cursor;
                self.cursor = self.limit;
                self.ket = self.cursor;
                self.slice_del();
            }
        }
        self.cursor = start;
    }

    fn more_than_one_syllable_word(&mut self) -> bool {
        let start = self.cursor;
        for _ in 0..2 {
            if !self.go_out_grouping(VOWEL) {
                return false;
            }
            self.cursor += 1;
        }
        self.cursor = start;
        true
    }

    fn postlude(&mut self) {
        self.limit_backward = self.cursor;
        self.cursor = self.limit;
        let m = self.mark();
        if self.is_reserved_word() {
            return;
        }
        self.reset(m);
        self.append_u_to_stems_ending_with_d_or_g();
        self.reset(m);
        self.post_process_last_consonants();
        self.cursor = self.limit_backward;
    }

    fn stem(&mut self) {
        self.remove_proper_noun_suffix();
        if !self.more_than_one_syllable_word() {
            return;
        }
        self.limit_backward = self.cursor;
        self.cursor = self.limit;
        let m = self.mark();
        self.stem_nominal_verb_suffixes();
        self.reset(m);
        if !self.continue_stemming_noun_suffixes {
            return;
        }
        let m = self.mark();
        self.stem_noun_suffixes();
        self.reset(m);
        self.cursor = self.limit_backward;
        self.postlude();
    }
}
