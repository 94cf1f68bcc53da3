use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

/// Closed-class English words: articles, determiners, pronouns, prepositions,
/// conjunctions, auxiliaries, modals and a few high-frequency adverbs.
const FUNCTION_WORDS: &str = "
a an the this that these those such
some any each every either neither no none all both few many much more most
less least several enough other another same own
i me my mine myself we us our ours ourselves you your yours yourself yourselves
he him his himself she her hers herself it its itself they them their theirs
themselves one ones oneself someone somebody something anyone anybody anything
everyone everybody everything nobody nothing whoever whatever whichever
who whom whose which what when where why how whether
about above across after against along amid among amongst around as at
before behind below beneath beside besides between beyond but by concerning
despite down during except excluding following for from in including inside
into like near of off on onto opposite out outside over past per plus
regarding round since than through throughout till to toward towards under
underneath unlike until unto up upon versus via with within without
and or nor so yet because although though unless while whereas if then
else once lest provided whenever wherever hence thus therefore however
moreover furthermore otherwise meanwhile accordingly
am is are was were be been being
do does did doing done
have has had having
can cannot could may might must shall should will would ought
need needs dare
isn aren wasn weren hasn haven hadn doesn don didn won wouldn shan shouldn
can couldn mustn mightn needn s t d ll ve re m
not also very just only even still already again too quite rather almost
always never ever often sometimes usually here there now then today
well ever soon later instead perhaps maybe either indeed really simply
e g eg ie etc vs
yes ok
";

/// Common requirement verbs that carry no telltale suffix.
const VERBS: &str = "
accept access add allow apply ask assign authenticate authorize build calculate
call cancel change check choose clear click close collect compare compute
configure confirm connect contain convert copy count create define delete
deploy describe design display download edit enable enter export extract fetch
fill filter find generate get give handle hide implement import include insert
integrate join keep let list load lock log login logout make manage map merge
move notify open parse pass persist post process provide publish pull push put
query read receive redirect refresh register reject remove render replace
report request reset resize restore retrieve return run save schedule search
select send set show sign sort split start stop store submit subscribe support
switch sync track transform trigger update upload use validate verify view
write
";

/// Technical nouns that the suffix rules would otherwise misread.
const TECH_NOUNS: &str = "
api apis table tables service services class classes template templates
database databases endpoint endpoints string strings component components
controller controllers repository repositories schema schemas index indexes
indices column columns row rows field fields form forms button buttons page
pages module modules function functions method methods model models entity
entities interface interfaces object objects array arrays list lists map maps
record records request requests response responses state status date dates
update updates candidate candidates aggregate aggregates rate rates
thing things setting settings listing listings heading headings
";

fn words(list: &str) -> impl Iterator<Item = &str> {
    list.split_whitespace()
}

/// A set of lowercase words, loadable from a plain word-per-line file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    words: HashSet<String>,
}

impl Lexicon {
    /// The built-in function-word list.
    pub fn function_words() -> Self {
        words(FUNCTION_WORDS).collect()
    }

    pub(crate) fn verbs() -> Self {
        words(VERBS).collect()
    }

    pub(crate) fn tech_nouns() -> Self {
        words(TECH_NOUNS).collect()
    }

    /// Parses one word per line; blank lines and `#` comments are ignored.
    /// Words are lowercased.
    pub fn parse(text: &str) -> Self {
        text.lines().map(|line| line.split('#').next().unwrap_or("").trim()).filter(|line| !line.is_empty()).collect()
    }

    pub fn load(path: impl AsRef<Path>) -> io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<S: AsRef<str>> FromIterator<S> for Lexicon {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self { words: iter.into_iter().map(|w| w.as_ref().to_lowercase()).collect() }
    }
}
