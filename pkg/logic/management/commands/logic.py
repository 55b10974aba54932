from django.core.management.base import BaseCommand, CommandError

from logic import services
from logic.exceptions import LogicError
from logic.formats import format_function_rows, parse_structure, parse_team, read_text
from logic.grammar import parse_formula
from logic.rewrite import apply_rule, prenexify, primality_reduce
from logic.semantics import Bounded
from logic.structures import Team
from logic.syntax import format_varset, free_variables, parse_path, to_text
from logic.verify import SUITES, entails, run_suite, z_equivalent

EXIT_FALSE = 1
EXIT_INPUT = 2


class Command(BaseCommand):
    help = "Evaluate, rewrite and verify IF/DF formulas with generalized quantifiers."

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest="action", required=True)

        evaluate = actions.add_parser("eval", help="M,X ⊨ φ")
        self._inputs(evaluate)
        self._formula(evaluate)
        self._semantics(evaluate)
        evaluate.add_argument(
            "--tarski", action="store_true", help="Classical satisfaction row by row."
        )

        meaning = actions.add_parser("meaning", help="The meaning set of a quantified formula.")
        self._inputs(meaning)
        self._formula(meaning)
        meaning.add_argument("--strict", action="store_true")

        equiv = actions.add_parser("equiv", help="Brute-force Z-equivalence of two formulas.")
        equiv.add_argument("--formula", action="append", default=[], metavar="FILE")
        equiv.add_argument("--expr", action="append", default=[], metavar="TEXT")
        equiv.add_argument("--quantifiers", metavar="FILE")
        equiv.add_argument("--modulus", default="", help="Comma separated variables.")
        equiv.add_argument("--entails", action="store_true", help="Check one direction only.")
        self._semantics(equiv)
        self._bounds(equiv)

        rewrite = actions.add_parser("rewrite", help="Apply one rewrite rule.")
        self._formula(rewrite)
        rewrite.add_argument("--quantifiers", metavar="FILE")
        rewrite.add_argument("--rule", required=True)
        rewrite.add_argument("--path", default="root")
        rewrite.add_argument("--side", choices=("left", "right"))
        rewrite.add_argument("--new", help="Fresh variable for rename_bound.")
        rewrite.add_argument("--variant", choices=("a", "b"))
        rewrite.add_argument("--var", help="Variable for verticalize.")
        rewrite.add_argument("--size", type=int, help="Certification size for side conditions.")
        rewrite.add_argument("--bounded", action="store_true")

        prenex = actions.add_parser("prenex", help="Strongly regular prenex form.")
        self._formula(prenex)
        prenex.add_argument("--quantifiers", metavar="FILE")
        prenex.add_argument("--size", type=int)

        primality = actions.add_parser("primality", help="Search for a slash-free equivalent.")
        self._formula(primality)
        primality.add_argument("--quantifiers", metavar="FILE")
        primality.add_argument("--size", type=int)
        primality.add_argument("--depth", type=int)
        primality.add_argument("--bounded", action="store_true")

        check = actions.add_parser("check", help="Run a theorem suite.")
        check.add_argument("suite", choices=sorted(SUITES))
        check.add_argument("--quantifiers", metavar="FILE")
        check.add_argument("--count", type=int, help="Corpus size; defaults to the suite's own.")
        check.add_argument("--strict", action="store_true")
        self._bounds(check)

        qinfo = actions.add_parser("qinfo", help="Localized table and properties of a quantifier.")
        qinfo.add_argument("name")
        qinfo.add_argument("--quantifiers", metavar="FILE")
        qinfo.add_argument("--size", type=int, default=3)

    def _inputs(self, parser):
        parser.add_argument("--structure", required=True, metavar="FILE")
        parser.add_argument("--team", metavar="FILE", help="Defaults to the team {∅}.")
        parser.add_argument("--quantifiers", metavar="FILE")

    def _formula(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--formula", metavar="FILE")
        source.add_argument("--expr", metavar="TEXT")

    def _semantics(self, parser):
        parser.add_argument("--strict", action="store_true")
        parser.add_argument(
            "--bounded",
            nargs="?",
            const=Bounded.UNIFORM.value,
            choices=[mode.value for mode in Bounded],
        )

    def _bounds(self, parser):
        parser.add_argument("--size", type=int)
        parser.add_argument("--extra", type=int)
        parser.add_argument("--seed", type=int)

    def handle(self, *args, **options):
        action = options["action"]
        try:
            handler = getattr(self, f"handle_{action}")
            code = handler(options)
        except LogicError as error:
            raise CommandError(str(error), returncode=EXIT_INPUT) from error
        if code:
            raise SystemExit(code)

    def emit(self, *lines: str):
        for line in lines:
            self.stdout.write(line)

    # --- input loading ----------------------------------------------------

    def load_formula(self, options, registry):
        if options.get("expr") is not None:
            text, source = options["expr"], None
        else:
            text, source = read_text(options["formula"]), options["formula"]
        try:
            return registry.link(parse_formula(text))
        except LogicError as error:
            if source is not None:
                raise LogicError(f"{source}: {error}") from error
            raise

    def load_inputs(self, options):
        registry = services.registry(options.get("quantifiers"))
        structure = parse_structure(read_text(options["structure"]), options["structure"])
        if options.get("team"):
            team = parse_team(read_text(options["team"]), structure, options["team"])
        else:
            team = Team.unit()
        formula = self.load_formula(options, registry)
        if not team.rows and not team.variables:
            # the empty team over no variables stands for the empty team over any
            team = Team.empty(free_variables(formula))
        return registry, structure, team, formula

    # --- subcommands ------------------------------------------------------

    def handle_eval(self, options):
        registry, structure, team, formula = self.load_inputs(options)
        result = services.evaluate(
            structure,
            team,
            formula,
            registry,
            strict=options["strict"],
            bounded=options["bounded"],
            tarski=options["tarski"],
        )
        self.emit(f"RESULT {'true' if result else 'false'}")
        return 0 if result else EXIT_FALSE

    def handle_meaning(self, options):
        registry, structure, team, formula = self.load_inputs(options)
        found = services.meaning(structure, team, formula, registry, strict=options["strict"])
        for number, function in enumerate(found.functions, start=1):
            self.emit(f"FUNCTION {number}")
            rows = format_function_rows(function.items(), structure.domain)
            if rows:
                self.emit(rows)
        self.emit(f"COUNT {len(found.functions)}")
        if found.sentence_initial is not None:
            order = {element: i for i, element in enumerate(structure.domain)}
            values = " ".join(
                "{" + ",".join(sorted(value, key=order.__getitem__)) + "}"
                for value in found.sentence_initial
            )
            self.emit(f"SENTENCE_INITIAL {values}".rstrip())
        return 0

    def handle_equiv(self, options):
        registry = services.registry(options["quantifiers"])
        texts = [(text, None) for text in options["expr"]]
        texts += [(read_text(path), path) for path in options["formula"]]
        if len(texts) != 2:
            raise LogicError("equiv takes exactly two formulas (--expr or --formula)")
        left, right = (registry.link(parse_formula(text)) for text, _ in texts)
        modulus = [v.strip() for v in options["modulus"].split(",") if v.strip()]
        check = entails if options["entails"] else z_equivalent
        verdict = check(
            left,
            right,
            modulus,
            bounds=services.search_bounds(options["size"], options["extra"], options["seed"]),
            config=services.eval_config(options["strict"], options["bounded"]),
            registry=registry,
            bounded=bool(options["bounded"]),
        )
        label = "ENTAILS" if options["entails"] else "EQUIV"
        self.emit(*services.verdict_lines(label, verdict))
        return 0 if verdict.holds else EXIT_FALSE

    def handle_rewrite(self, options):
        registry = services.registry(options["quantifiers"])
        formula = self.load_formula(options, registry)
        context = services.rewrite_context(registry, options["size"], options["bounded"])
        rule_options = {}
        if options["side"]:
            rule_options["side"] = options["side"]
        if options["new"]:
            rule_options["new"] = options["new"]
        if options["variant"]:
            rule_options["variant"] = options["variant"]
        if options["var"]:
            rule_options["v"] = options["var"]
        try:
            step = apply_rule(
                options["rule"], formula, parse_path(options["path"]), context, **rule_options
            )
        except TypeError as error:
            raise LogicError(f"{options['rule']}: {error}") from None
        self.emit(str(step))
        if step.note:
            self.emit(f"# {step.note}")
        self.emit(f"FORMULA {to_text(step.formula)}")
        return 0

    def handle_prenex(self, options):
        registry = services.registry(options["quantifiers"])
        formula = self.load_formula(options, registry)
        rewrite = prenexify(formula, services.rewrite_context(registry, options["size"]))
        self.emit(*(str(step) for step in rewrite.steps))
        self.emit(f"MODULUS {format_varset(rewrite.modulus)}")
        self.emit(f"FORMULA {to_text(rewrite.formula)}")
        return 0

    def handle_primality(self, options):
        registry = services.registry(options["quantifiers"])
        formula = self.load_formula(options, registry)
        depth = options["depth"] or services.logic_settings()["PRIMALITY_DEPTH"]
        outcome = primality_reduce(
            formula,
            services.rewrite_context(registry, options["size"], options["bounded"]),
            depth,
        )
        self.emit(*(str(step) for step in outcome.steps))
        self.emit(f"PRIMALITY {outcome.status}")
        self.emit(f"FORMULA {to_text(outcome.formula)}")
        return 0 if outcome.reduced else EXIT_FALSE

    def handle_check(self, options):
        count = options["count"] or services.logic_settings()["CORPUS_SIZE"] or None
        verdict = run_suite(
            options["suite"],
            bounds=services.search_bounds(options["size"], options["extra"], options["seed"]),
            count=count,
            registry=services.registry(options["quantifiers"]),
            config=services.eval_config(options["strict"]),
        )
        self.emit(*services.verdict_lines(f"SUITE {options['suite']}", verdict))
        return 0 if verdict.holds else EXIT_FALSE

    def handle_qinfo(self, options):
        registry = services.registry(options["quantifiers"])
        info = services.quantifier_info(options["name"], options["size"], registry)
        self.emit(f"QUANTIFIER {info['name']} {info['kind']} size={info['size']}")
        if "table" in info:
            self.emit(info["table"])
        else:
            self.emit(f"# {info['description']}")
            if not info["exhaustive"]:
                self.emit("# sampled function families")
        for name, flag in info["properties"].items():
            self.emit(f"PROPERTY {name} {flag}")
        return 0
