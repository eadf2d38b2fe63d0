"""Regenerate the bundled training corpus at src/tokenmark/data/corpus.txt.

The corpus is a seeded Markov word stream over a fixed English word list:
every word gets a pinned successor set, and a walk over those sets emits
sentences of 6-18 words.  The output is deterministic, so the checked-in
file can always be rebuilt bit-identically with this script.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tokenmark.rng import SplitMix64  # noqa: E402

SEED = 20240901
TOKENS = 100_000
SUCCESSORS_PER_WORD = 14
BACKBONE_RATE = 0.22  # chance of emitting a function word instead

BASE_WORDS = """
time year people way day man thing woman life child world school state family
student group country problem hand part place case week company system program
question work government number night point home water room mother area money
story fact month lot right study book eye job word business issue side kind
head house service friend father power hour game line end member law car city
community name president team minute idea body information back parent face
others level office door health person art war history party result change
morning reason research girl guy moment air teacher force education foot boy
age policy process music market sense nation plan college interest death
experience effect use class control care field development role effort rate
heart drug show leader light voice wife whole police mind price report
decision son view relationship town road arm difference value building action
model season society tax director position player record paper space ground
form event official matter center couple site project activity star table
need court american oil situation cost industry figure street image phase
phone data picture practice piece land product doctor wall patient worker
news test movie north love support technology step baby computer type attention
film tree source kid director rest stage performance fire target trouble
theory agency spring bank sport board bed bird blood board bridge camp
campaign cancer candidate capital captain career cell challenge chance chair
character charge choice church circle claim coach coast color concept concern
conference congress connection context contract cup culture current customer
cycle dark debate degree design desk detail device dinner direction discussion
disease distance dog dream dust earth economy edge editor element energy
engine environment error evening evidence exchange exercise expert factor
failure faith fan farm fear feature feeling fish flight floor flower food
forest frame freedom fruit fuel future garden gas gate gift glass goal gold
grass growth guard guest guide hair hall hat hill hole hope horse hospital
hotel ice impact income initiative insect instance award balance battle beach
beginning belief benefit bill bit block bone border bottle bottom bowl box
brain branch bread breakfast breath brother brush budget bus button cabinet
cable cake camera cap card cash cat cause ceiling chain chapter cheese chest
chicken chief clock cloud club code coffee collection column comfort comment
committee competition conclusion condition construction contact content
contest contrast conversation cook copy corner cover cream credit crew crime
crowd crystal dance danger daughter deal debt depth desire dish distribution
document drama driver duty ear east effect egg election emotion emphasis
employee employer employment entrance equipment escape essay estate evening
examination example exception excitement excuse exit expansion explanation
expression extent fault feedback fence fiction finger finish flag flow fold
following foundation frame function fund gap gear gene gesture grade grain
grant graph guitar habit handle harbor harm hearing heat height highway
historian holiday honey honor host household housing hunt idea illness
imagination importance impression improvement incident increase independence
index indication individual influence ingredient injury inquiry inside
inspection inspector instruction insurance intention interaction interview
introduction invitation iron island item joint judge juice jump jury kitchen
knee knife knowledge lab lake language laughter layer leadership leading leaf
league lecture leg length lesson letter library limit link lip list living
load loan location lock log loss luck lunch machine magazine mail main
maintenance majority manager manner map margin mark marketing marriage mass
match material math meal meaning measurement meat medicine meeting memory
message metal meter method middle milk mirror mission mistake mixture mode
mood moon mountain mouse mouth move movement mud muscle museum nature neck
nerve net network night noise nose note notice novel object objective
obligation observation occasion ocean offer operation opinion opportunity
option orange order organization outcome oven owner pace pack package page
pain paint pair pan panel parking partner passage passion path pattern pause
payment peace pen penalty pencil pension period permission personality
perspective philosophy photo phrase physics piano pie pin pipe pitch plane
plant plastic plate platform play pleasure plenty poem poet poetry pool
population possession possibility post pot potato pound powder presence
presentation pressure priority prize procedure profession professor profile
profit promise proof property proposal protection psychology purpose quality
quantity quarter queen radio rain range ratio reaction reality recipe
recognition recommendation recording reference reflection region regret
relation relief remark repair replacement republic reputation request
requirement resolution resource response responsibility restaurant revenue
review revolution reward rhythm rice ring risk river rock rope routine row
rule safety salad salary salt sample sand scale scene schedule scheme science
screen script sea search season seat second secret secretary section sector
security selection self sequence series session setting shape share shelter
shift shirt shock shoe shop shoulder sign signal signature silver singer
sister skill skin sky sleep slice slide smoke snow society sock soil solution
song sound soup speaker speech speed spirit spite sport spot spray spread
square stable staff standard statement station status steak steel stick stock
stomach stone storage store storm strain strategy strength stress stretch
string structure struggle style subject substance success suggestion summer
sun supply surface surgery surprise survey suspect sweet swim switch sympathy
tale talent talk tank task taste tea teaching tear telephone television
temperature tennis tension term text theme thought throat ticket tide tip
title tone tongue tool tooth top topic total touch tour tournament tower
track trade tradition traffic trail train transition transportation travel
treat trick trip truck trust truth tune turn twist uncle understanding union
unit university upper usage user valley variation variety vehicle version
video village vision visit volume wage wait walk warning wash waste watch
wave wealth weather web wedding weekend weight welcome west wheel wind window
wine wing winner winter wire wisdom wish wood wool worry writer yard youth
zone
""".split()

BACKBONE = """
the a an and or but of in on at to for with from by about over under after
before between through during against among is was are were be been being has
have had will would can could may might must shall should not no nor so yet
this that these those it its they them their he she his her we our you your
i my as if when while where because although however therefore moreover
""".split()


def build_successors(words, stream):
    table = {}
    pool = list(words)
    for word in words:
        succ = []
        for _ in range(SUCCESSORS_PER_WORD):
            succ.append(pool[int(stream.random() * len(pool))])
        table[word] = succ
    return table


def main() -> None:
    stream = SplitMix64(SEED)
    words = sorted(set(BASE_WORDS))
    successors = build_successors(words, stream)
    out = []
    current = words[int(stream.random() * len(words))]
    sentence_left = 6 + int(stream.random() * 13)
    while len(out) < TOKENS:
        if sentence_left == 0:
            out.append(".")
            sentence_left = 6 + int(stream.random() * 13)
            current = words[int(stream.random() * len(words))]
            continue
        if stream.random() < BACKBONE_RATE:
            out.append(BACKBONE[int(stream.random() * len(BACKBONE))])
        else:
            out.append(current)
            current = successors[current][int(stream.random() * SUCCESSORS_PER_WORD)]
        sentence_left -= 1

    target = Path(__file__).resolve().parents[1] / "src" / "tokenmark" / "data" / "corpus.txt"
    target.parent.mkdir(parents=True, exist_ok=True)
    lines = [" ".join(out[i : i + 20]) for i in range(0, len(out), 20)]
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(out)} tokens, vocab {len(set(out))}, to {target}")


if __name__ == "__main__":
    main()
