$.ajax({
  url: 'https://api.bookshop.test/api/orders',
  type: 'post',
  contentType: 'application/json',
  data: '{"customer":"c-17","items":[{"isbn":"9780262510875","quantity":1}]}'
});
