function allBooks(page) {
  $.get('https://api.bookshop.test/api/books?page=' + page);
}
