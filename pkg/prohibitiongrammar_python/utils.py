"""
utils.py - Helpers shared by the grammar toolkit modules

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import os

from jinja2 import Environment, FileSystemLoader, select_autoescape

EPSILON_TEXT = "eps"


class GrammarFormatError(Exception):
    """Error raised when a word or budget specification is malformed"""


class Utils:
    """Class containing utility methods."""

    @staticmethod
    def tokenize_word(text):
        """Split a space-separated word into its terminal tokens.

        Args:
            text (str): Tokens separated by whitespace. Quoted tokens are unquoted.
                An empty string or ``eps`` denotes the empty word.

        Returns:
            tuple: Terminal names
        """
        tokens = text.split()
        if tokens == [EPSILON_TEXT]:
            return ()
        word = []
        for token in tokens:
            if token.startswith('"'):
                if len(token) < 3 or not token.endswith('"'):
                    raise GrammarFormatError(f"Invalid quoted token {token}")
                token = token[1:-1]
            elif token == EPSILON_TEXT:
                raise GrammarFormatError(f"'{EPSILON_TEXT}' must appear alone")
            word.append(token)
        return tuple(word)

    @staticmethod
    def format_word(word):
        """Render a word as space-joined tokens, ``eps`` for the empty word."""
        return " ".join(word) if word else EPSILON_TEXT

    @staticmethod
    def parse_budget(text):
        """Parse a budget specification of the form ``STEPS,LENGTH``.

        Args:
            text (str): Two positive integers separated by a comma

        Raises:
            GrammarFormatError: Custom error class

        Returns:
            tuple: (max_steps, max_form_length)
        """
        try:
            steps, length = (int(part) for part in text.split(","))
        except Exception as exc:
            raise GrammarFormatError(
                f"Invalid budget provided - {text} (expected STEPS,LENGTH)"
            ) from exc
        return steps, length

    @staticmethod
    def ensure_list(val):
        """Checks whether provided object is a single value or a list.
           If a single value, create a new list and append it to the list.
           If list, just return the list as-is.

        Args:
            val (str, dict or list): A value parsed from XML data
        """
        if isinstance(val, list):
            return val
        if val is None:
            return []
        return [val]

    @staticmethod
    def render_template(filename, template_vars, template_dir=None):
        """Render a text artifact stored as a Jinja2 file

        Args:
            filename (str): Jinja2 template filename. Place in "templates" directory or configure template_dir.
            template_vars (dict): Dictionary of variables to inject into the template.
            template_dir (str): Directory to look for templates. Default is the package "templates" directory.

        Returns:
            str
        """
        if not template_dir:
            template_dir = os.path.join(
                os.path.dirname(os.path.abspath(__file__)), "templates"
            )
        environment = Environment(
            trim_blocks=True,
            lstrip_blocks=True,
            loader=FileSystemLoader(template_dir),
            autoescape=select_autoescape(enabled_extensions=("xml",), default=False),
            keep_trailing_newline=True,
        )
        template = environment.get_template(filename)
        return template.render(**template_vars)
