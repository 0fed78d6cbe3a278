from .csv_data import read_csv, write_csv
from .dot import to_dot
from .dsl import parse_dsl, print_dsl
from .json_format import from_json, to_json
from .model_files import load_model, save_model

__all__ = ['parse_dsl', 'print_dsl', 'to_json', 'from_json', 'to_dot', 'read_csv', 'write_csv',
           'load_model', 'save_model']
