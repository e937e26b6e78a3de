function touch(isbn) {
  $.ajax({url: 'https://api.bookshop.test/api/books/' + isbn, type: 'PUT'});
}
